"""qincompat: asymptotic incompatibility of multiparameter quantum models.

Computes SLD operators, quantum Fisher information and Uhlmann curvature
matrices, the incompatibility spectrum of ``i Q^{-1} U`` and the AI
measure R for finite-dimensional and single-mode Gaussian models, plus
random-state sweeps, fixed-spectrum curves and lossy-dynamics experiments.
"""
from .errors import (DegenerateChart, DomainError, InvalidDimension,
                     InvalidPOVM, InvalidReparametrization, NumericalOverflow,
                     PureStateSingular, QincompatError, RankDeficient,
                     SingularQfim, TruncationError)
from .estimation import (EstimationReport, ai_measure, cfim, compat_bound,
                         degenerate_delta, full_tomography_compat_bound,
                         holevo_range, incompat_spectrum, model_report, qfim,
                         qu_from_derivs, reparametrize, report_from_matrices,
                         scalar_sld_bound, sld_set, submodel_ai_scan,
                         submodel_report, uhlmann)
from .gaussian import (GaussianParams, GaussianState, ai_gaussian,
                       evolve_lossy, excitation_parametrization, fock_model,
                       freq_loss_model, gaussian_qfim, gaussian_report,
                       gaussian_uhlmann, moments, qfim_closed, state_family,
                       to_fock, uhlmann_closed)
from .linalg import (GeneratorBasis, gellmann_basis, hermitian_eig,
                     lyapunov_sld, purity)
from .models import (GibbsSpec, ParamModel, bloch_qubit, finite_diff_derivs,
                     from_spectrum_unitary, gibbs_model, mixture_coordinates,
                     qudit_mixture)
from .sampler import (SweepRecord, gibbs_curve, i_spectrum_conjecture_check,
                      random_state, sample_haar_unitary, sample_simplex,
                      sweep)

__version__ = "0.1.0"

__all__ = [
    "DegenerateChart", "DomainError", "InvalidDimension", "InvalidPOVM",
    "InvalidReparametrization", "NumericalOverflow", "PureStateSingular",
    "QincompatError", "RankDeficient", "SingularQfim", "TruncationError",
    "EstimationReport", "ai_measure", "cfim", "compat_bound",
    "degenerate_delta", "full_tomography_compat_bound", "holevo_range",
    "incompat_spectrum", "model_report", "qfim", "qu_from_derivs",
    "reparametrize", "report_from_matrices", "scalar_sld_bound", "sld_set",
    "submodel_ai_scan", "submodel_report", "uhlmann",
    "GaussianParams", "GaussianState", "ai_gaussian", "evolve_lossy",
    "excitation_parametrization", "fock_model", "freq_loss_model",
    "gaussian_qfim", "gaussian_report", "gaussian_uhlmann", "moments",
    "qfim_closed", "state_family", "to_fock", "uhlmann_closed",
    "GeneratorBasis", "gellmann_basis", "hermitian_eig", "lyapunov_sld",
    "purity",
    "GibbsSpec", "ParamModel", "bloch_qubit", "finite_diff_derivs",
    "from_spectrum_unitary", "gibbs_model", "mixture_coordinates",
    "qudit_mixture",
    "SweepRecord", "gibbs_curve", "i_spectrum_conjecture_check",
    "random_state", "sample_haar_unitary", "sample_simplex", "sweep",
    "__version__",
]
