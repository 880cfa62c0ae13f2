"""Noise-shaping quantization vs memoryless rounding for sparse spike
recovery from Fourier measurements: sampling, encoders, TV-min decoding,
error metrics, and a Monte-Carlo benchmark harness."""

from .bench import (CSV_FIELDS, ExperimentConfig, TrialRecord, dump_vector,
                    load_vector, read_config, read_records, run_experiment,
                    summarize, write_config, write_records, write_summary)
from .decode import (RecoveredMeasure, SolverReport, TvMinProblem, decode_beta,
                     decode_msq, extract_spikes, tv_min)
from .errors import (ClusterAmbiguityError, ConvergenceError, DimensionError,
                     InputRangeError, NumericalAnomalyError, ParameterError)
from .measures import (AtomicMeasure, load_measure, min_separation,
                       random_measure, save_measure, torus_distance, tv_norm)
from .metrics import (ErrorReport, SpikeClusters, cluster_radius, cluster_spikes,
                      error_report, lipschitz_bound, max_difference_quotient,
                      rate_envelope, reciprocal_weight_shape, theoretical_envelope)
from .quantize import (Alphabet, QuantizationResult, QuantizerConfig,
                       beta_quantize, condensed_noise_bound, msq,
                       quantized_indices, read_quantized, round_to_alphabet,
                       select_parameters, write_quantized)
from .sampling import (CondensationPlan, apply_weights, condense,
                       fourier_sample, noise_transfer_apply, weight,
                       weight_bound)

__version__ = "0.1.0"
