//! Vacuum radiation from moving mirrors and open two-mirror cavities in one
//! spatial dimension.

pub mod cavity;
pub mod crosscheck;
pub mod error;
pub mod force;
pub mod planner;
pub mod radiation;
pub mod raymap;
pub mod scenario;
pub mod spectrum;
pub mod trajectory;
pub mod units;

pub use cavity::{eta, finesse, finesse_of, CavityConfig, Mirror, SignConvention};
pub use error::{Error, Result, Warning};
pub use force::{dissipative_force_time, susceptibility, ForceSeries, Susceptibility};
pub use planner::{plan, thermal_occupation, ExperimentPlan, PlanInputs};
pub use trajectory::{peak_velocity, Kinematics, Motion, SampledPath, Trajectory};
pub use units::{theta_from_temperature, FieldTemperature, UnitSystem};
pub use raymap::{
    bounce_time, mobius_resum, ray_map_single, trace_paths, BounceEvent, Chirality, InputChannel,
    NullCoordinate, PathContribution, PathSet,
};
pub use radiation::{energy_density_cavity, flux_single_mirror, FluxSeries};
pub use spectrum::{
    bogoliubov_beta, photon_spectrum, total_photon_number, MeasurementWindow, Source,
    SpectrumGrid, SpectrumResult, WindowShape,
};
