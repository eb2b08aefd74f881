#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcl/config.hpp"
#include "qcl/effective.hpp"
#include "qcl/model.hpp"
#include "qcl/report.hpp"
#include "qcl/spectral.hpp"

namespace qcl {

/// Command-line overrides on top of the config file.
struct RunOverrides {
    std::string out_dir;            // empty: [run] out_dir
    std::int64_t seed = -1;         // <0: [run] seed
    std::vector<double> eps_list;   // empty: [sweep] eps_list
    bool dry_run = false;
};

struct ModelBundle {
    SpatialGrid grid;
    ParticleModel particles;
    ModeSet modes;
    bool massive = false;  // min omega > 0
};

/// Build grid, particle potential and mode set from [model]; validates the
/// phase-sampling criterion |k| h <= pi/4 for declared mode sets.
ModelBundle build_model(const Config& cfg);

struct FieldStateSpec {
    enum class Kind { Vacuum, Coherent, Mixture, Number };
    Kind kind = Kind::Vacuum;
    std::vector<cplx> coherent_f;
    ClassicalMeasure mixture;
    std::vector<int> number_occupations;

    /// The classical limit measure of the eps-family this spec describes.
    ClassicalMeasure classical_limit(int n_modes) const;
    /// Largest per-mode |amplitude|^2 over the atoms (for cutoff policy).
    std::vector<double> peak_mode_intensity(int n_modes) const;
};

FieldStateSpec build_field_state(const Config& cfg, int n_modes);

struct SweepSettings {
    std::vector<double> eps_list;   // kept in the order given
    bool auto_cutoffs = true;
    std::vector<int> fixed_cutoffs;
    double tail_tol = 1e-8;
    int min_cutoff = 4;
};

SweepSettings build_sweep(const Config& cfg, const RunOverrides& ov);

/// Per-mode cutoffs adequate for the state at the given eps.
std::vector<int> cutoffs_for(const SweepSettings& sweep, const FieldStateSpec& state,
                             double eps, int n_modes);

FockState make_field_state(const FieldStateSpec& spec, const FockSpacePtr& space,
                           double tail_tol);

// Experiment runners. Configuration or precondition violations throw
// (ConfigError and friends); failed invariant assertions are recorded in the
// report, never thrown.
RunReport cmd_effective(const Config& cfg, const RunOverrides& ov = {});
RunReport cmd_gse(const Config& cfg, const RunOverrides& ov = {});
RunReport cmd_trap(const Config& cfg, const RunOverrides& ov = {});
RunReport cmd_check(const Config& cfg, const RunOverrides& ov = {});

/// CLI: qcl <effective|gse|trap|check> --config PATH [--out DIR] [--seed N]
/// [--eps-list ...] [--dry-run]. Returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace qcl
