"""Exact-arithmetic kernel for towers of matrix potentials of the
commutativity equation, the triangular group actions on them, their
loop-space characterization, normalization to the canonical diagonal form,
and the wave-function construction."""

from .series import (CoordinateMap, DomainError, DualSeries, Series,
                     SeriesMatrix, ShapeError, series_matrix_inverse)
from .tower import (JSeries, PQPolynomial, Report, Tower, WindowError,
                    full_potential, j_series, lift_dual_tower,
                    reconstruct_from_first_row, tower_diag_seed,
                    verify_commutativity, verify_flat, verify_master)
from .actions import (GLElement, GMinusElement, GPlusElement, act_r, act_r0,
                      act_s, act_s_on_j, bracket_check,
                      check_spectrum_invariance, conjugate, exp_act_r,
                      exp_act_s, infinitesimal_act_s_on_j, operator_r_hat,
                      operator_s_hat, s_hat_commutator_check)
from .loopspace import (VMinusVector, VPlusVector, check_factorization,
                        mu_apply, phi_apply, q_functional)
from .normalize import (NormalizationResult, apply_factors,
                        check_degree_bounds, diagonalize_step, kill_constants,
                        normalize)
from .kp import (AMatrixSeries, WaveFunction, check_action_sign, verify_axioms,
                 verify_wave_dm00, wave_direction, wave_from_a,
                 wave_lie_derivative, wave_lie_derivative_expansion,
                 wave_tower)

__version__ = "0.1.0"
