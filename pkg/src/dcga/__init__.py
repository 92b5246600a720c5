"""Model-building GA with sub-structural niching for cyclic trap landscapes."""

__version__ = "0.1.0"

from .core import (Individual, Population, RngStream, random_population,
                   tournament_select, unitation, UnevaluatedPopulationError,
                   RNG_ALGORITHM)
from .dynamics import (DynamicEnvironment, PhaseLandscape, TrapSpec,
                       ENVIRONMENTS, SHAPE_STANDARD, SHAPE_PEAK_AT_ZEROS,
                       SHAPE_PEAK_AT_ONES, changed, current_optimum, evaluate,
                       make_environment, phase_of, theoretical_schema_proportion,
                       theoretical_schema_proportion_exact, trap_value,
                       trap_value_exact)
from .mpm import (MdlScore, Partition, group_entropy, learn_model, mdl_score,
                  iter_set_partitions, exhaustive_partition_scores)
from .schema import (SamplingDistribution, SchemaTable, DegenerateTableError,
                     MODE_FREQUENCY, MODE_SCHEM1, MODE_SCHEM2, MODES,
                     build_table, distribution, sample_offspring)
from .solver import (METHODS, GenerationRecord, RecoveryEvent, RunTrace,
                     SolverConfig, generations_to_recover, run,
                     warmup_generation)
from .harness import (AggregateSeries, ExperimentConfig, FeasibilityReport,
                      aggregate, emit_outputs, feasibility_check, read_runs_csv,
                      run_experiment, seed_range)
