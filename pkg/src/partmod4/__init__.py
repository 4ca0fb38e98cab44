"""Partition values modulo 4, mock theta expansions, twisted partition series,
Hilbert class polynomials and Sturm-bound relations over Z/4."""

__version__ = "0.1.0"

from .exact_arith import Ring, chi, kronecker, qualifying_discriminants
from .qseries import (LaurentSeries, PartitionTable, PrecisionError, delta_series, e4_series,
                      euler_product, invdelta_series, j_series, partition_table)
from .mock_theta import RComponents, c_R, f_series, omega_series, r_components, r_components_fast
from .binary_qf import ClassGroupData, QuadForm, class_number, reduced_forms
from .hilbert import IntPolynomial, hilbert_mod, hilbert_poly, j_eval
from .congruence import (gauss_sum_check, logderiv_series, normalized_series, twisted_series,
                         verify_theorem1)
from .sturm import Relation, Z4Matrix, find_relations, howell_form, kernel_mod4, sturm_bound
