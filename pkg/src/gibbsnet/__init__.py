"""Classification by Gibbs-weighted ensembles of random threshold networks."""
from .config import RunConfig, load_config
from .data import LabeledPoint, TrainingSet, holdout_split, load_dataset, save_dataset
from .ensemble import (
    EnsembleEstimate,
    GibbsEnsemble,
    build,
    convergence_curve,
    evaluate,
    load_ensemble,
    predict,
    save_ensemble,
)
from .errors import (
    AcceptanceTooLow,
    ConfigError,
    DataError,
    DimensionError,
    DomainError,
    ParameterError,
    ResourceError,
)
from .network import Activation, Architecture, NetworkParams, eval_network, eval_neuron
from .oracle import GridSpec, exact_average, exact_mixed_average
from .sampling import ArchitecturePool, ParamDistribution, SeedSpec
from .selection import ScoredNetwork, accept_zero_error, error_count, gibbs_weights

__version__ = "0.1.0"
