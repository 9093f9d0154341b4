"""Void-monomer-dimer chain toolkit.

Combinatorics of VMD tilings, the fragmented matrix-product ground states
they label, exact diagonalization of the associated spin-1/2 chain under
open/periodic/Dirichlet boundary conditions, rigorous spectral-gap
certificates, and large-volume correlation functions.
"""

from .tiling import (
    Domino,
    RootTiling,
    VmdTiling,
    count_roots,
    enumerate_roots,
    expand_root,
    induced_tiling,
    max_particle_number,
    monomer_root,
    parse_configuration,
    particle_content,
    root_from_text,
    root_of,
    root_to_text,
    tiling_projector,
)
from .states import (
    SparseState,
    alpha,
    alpha_exact,
    eta_state,
    ground_projector,
    norm_sq_closed,
    norm_sq_exact,
    squeezed_tt,
    vmd_state,
)
from .hamiltonian import (
    ModelParams,
    boundary_mode_block,
    build,
    dump_operator,
    physical_kappa,
    sector_basis,
    sector_block,
    sector_hamiltonian,
    symmetry_ops,
)
from .spectra import (
    SpectrumResult,
    chain_gap,
    dense_spectrum,
    gap_sweep,
    inverse_compressibility,
    kernel_dimension,
    lowest_eigenvalues,
    sector_ground_energy,
    spectral_gap,
)
from .bounds import (
    FCurve,
    KnabeInputs,
    SpectralConstants,
    f_approx,
    f_curve,
    f_n,
    knabe_finite_size_bound,
    knabe_inputs,
    martingale_bound,
    martingale_epsilon,
    obc_gap_bound,
    periodic_gap_bound,
    reduction_identity_gap,
)
from .correlations import (
    DiagonalObservable,
    decay_rate,
    diag_expectation,
    dislocation_expectation,
    dislocation_pair,
    dislocation_truncated_pair,
    fit_decay,
    inverse_square_weights,
    smeared_correlation,
    string_order,
    truncated_pair,
    tt_density_exact,
)

__version__ = "0.1.0"
