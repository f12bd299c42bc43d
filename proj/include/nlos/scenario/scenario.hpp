#pragma once

#include "nlos/optics/detection.hpp"
#include "nlos/optics/elements.hpp"
#include "nlos/optics/grid.hpp"
#include "nlos/optics/propagation.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlos::scenario {

enum class ScenarioKind { one_wall, same_side, rotating_wall, two_walls };

std::string_view to_string(ScenarioKind kind);
/// Accepts "one-wall", "same-side", "rotating-wall", "two-walls"; throws ConfigError otherwise.
ScenarioKind parse_kind(std::string_view name);

struct PatchOffset {
    int x = 0;
    int y = 0;
    friend bool operator==(const PatchOffset&, const PatchOffset&) = default;
};

/// Geometry and sampling of one NLOS layout. The reflective chain is unfolded
/// onto a single optical axis; each wall is a thin phase screen.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::one_wall;
    optics::GridSpec grid{};

    double d_object_wall = 0.20;
    double d_wall_camera = 0.20;
    double d_wall_wall = 0.20;    ///< two_walls only
    double d_source_wall = 0.20;  ///< same_side only
    double source_x = 0.0;        ///< lateral point-source position, same_side only
    double source_y = 0.0;

    double object_size = 2.56e-3;  ///< side of the square object, meters

    std::uint64_t wall_seed = 1;
    std::uint64_t wall2_seed = 2;      ///< two_walls only
    std::uint64_t rotation_seed = 3;   ///< rotating_wall patch stream
    int wall_scale = 4;                ///< wall screen is wall_scale x the grid along each axis
    int wall_facet = 1;                ///< grid pixels per wall facet

    PatchOffset illumination_patch{};                 ///< same_side illumination spot, and the one_wall/two_walls patch
    std::optional<PatchOffset> observation_patch{};   ///< same_side; default is half a wall away

    double lens_magnification = 1.0;
    double lens_na = 0.0;  ///< 0 disables the pupil
    optics::DetectionMode detection = optics::DetectionMode::modulus_squared;

    /// Throws ConfigError when distances, seeds or patches are inconsistent.
    void validate() const;
    optics::GridSpec wall_grid() const;
    PatchOffset effective_observation_patch() const;
};

/// Everything needed, with the ScenarioConfig and the object, to regenerate a
/// capture bit-exactly.
struct CaptureProvenance {
    ScenarioKind kind = ScenarioKind::one_wall;
    std::uint64_t wall_seed = 0;
    std::optional<std::uint64_t> wall2_seed;
    std::optional<std::uint64_t> rotation_seed;
    std::uint64_t capture_index = 0;
    std::vector<PatchOffset> patches;  ///< wall windows in pipeline order
    std::int64_t object_id = -1;
    int label = -1;
    std::string version;

    friend bool operator==(const CaptureProvenance&, const CaptureProvenance&) = default;
};

struct Capture {
    optics::IntensityImage image;
    CaptureProvenance provenance;
};

/// A configured scenario with its walls and propagators precomputed. run() is
/// const and may be called concurrently from several threads.
class Scenario {
public:
    explicit Scenario(const ScenarioConfig& cfg);

    /// Dispatches on the configured kind. `capture_index` only matters for the
    /// rotating wall, where it selects the wall patch.
    Capture run(const optics::AmplitudeMask& object, std::uint64_t capture_index = 0) const;

    Capture run_one_wall(const optics::AmplitudeMask& object) const;
    Capture run_same_side(const optics::AmplitudeMask& object) const;
    Capture run_rotating_wall(const optics::AmplitudeMask& object, std::uint64_t capture_index) const;
    Capture run_two_walls(const optics::AmplitudeMask& object) const;

    /// Wall window used by the rotating wall for a given capture.
    PatchOffset rotation_patch(std::uint64_t capture_index) const;

    const ScenarioConfig& config() const noexcept { return cfg_; }
    /// Sampling diagnostics gathered while configuring the propagators.
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    void require_kind(ScenarioKind k) const;
    void apply_wall(optics::ComplexField& field, const std::vector<optics::complex>& wall,
                    const optics::GridSpec& wall_grid, PatchOffset patch) const;
    optics::IntensityImage camera(optics::ComplexField field) const;
    CaptureProvenance base_provenance() const;
    const optics::AngularSpectrumPropagator& propagator(double distance) const;

    ScenarioConfig cfg_;
    optics::GridSpec wall_grid_;
    std::vector<optics::complex> wall_;   ///< exp(i phase) of wall 1
    std::vector<optics::complex> wall2_;  ///< exp(i phase) of wall 2 (two_walls)
    std::vector<optics::AngularSpectrumPropagator> propagators_;
    std::optional<optics::ComplexField> source_field_;
    std::vector<std::string> warnings_;
};

Capture run_one_wall(const ScenarioConfig& cfg, const optics::AmplitudeMask& object);
Capture run_same_side(const ScenarioConfig& cfg, const optics::AmplitudeMask& object);
Capture run_rotating_wall(const ScenarioConfig& cfg, const optics::AmplitudeMask& object, std::uint64_t capture_index);
Capture run_two_walls(const ScenarioConfig& cfg, const optics::AmplitudeMask& object);
Capture run(const ScenarioConfig& cfg, const optics::AmplitudeMask& object, std::uint64_t capture_index = 0);

/// Configuration with the seeds recorded in `prov` substituted in.
ScenarioConfig config_from_provenance(const ScenarioConfig& cfg, const CaptureProvenance& prov);

/// Re-runs a capture from its provenance.
Capture rerun(const ScenarioConfig& cfg, const optics::AmplitudeMask& object, const CaptureProvenance& prov);

}  // namespace nlos::scenario
