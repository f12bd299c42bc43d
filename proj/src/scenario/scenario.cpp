#include "nlos/scenario/scenario.hpp"

#include "nlos/error.hpp"
#include "nlos/random.hpp"
#include "nlos/version.hpp"

#include <cmath>
#include <string>

namespace nlos::scenario {

using optics::AmplitudeMask;
using optics::ComplexField;
using optics::complex;

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::one_wall: return "one-wall";
        case ScenarioKind::same_side: return "same-side";
        case ScenarioKind::rotating_wall: return "rotating-wall";
        case ScenarioKind::two_walls: return "two-walls";
    }
    throw ConfigError("unknown scenario kind");
}

ScenarioKind parse_kind(std::string_view name) {
    for (auto k : {ScenarioKind::one_wall, ScenarioKind::same_side, ScenarioKind::rotating_wall, ScenarioKind::two_walls})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown scenario '" + std::string(name) +
                      "' (expected one-wall, same-side, rotating-wall or two-walls)");
}

namespace {

bool cyclic_overlap(int a, int b, int extent, int period) {
    const int d = ((b - a) % period + period) % period;
    return d < extent || d > period - extent;
}

}  // namespace

optics::GridSpec ScenarioConfig::wall_grid() const {
    optics::GridSpec w = grid;
    w.nx = grid.nx * wall_scale;
    w.ny = grid.ny * wall_scale;
    return w;
}

PatchOffset ScenarioConfig::effective_observation_patch() const {
    if (observation_patch) return *observation_patch;
    const auto w = wall_grid();
    return {illumination_patch.x + w.nx / 2, illumination_patch.y};
}

void ScenarioConfig::validate() const {
    grid.validate();
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be > 0");
    };
    positive(d_object_wall, "d_object_wall");
    positive(d_wall_camera, "d_wall_camera");
    positive(object_size, "object_size");
    if (kind == ScenarioKind::two_walls) {
        positive(d_wall_wall, "d_wall_wall");
        if (wall2_seed == wall_seed) throw ConfigError("two-walls requires a second, distinct wall seed");
    }
    if (kind == ScenarioKind::same_side) positive(d_source_wall, "d_source_wall");
    if (wall_scale < 1) throw ConfigError("wall_scale must be >= 1");
    if (wall_facet < 1) throw ConfigError("wall_facet must be >= 1");
    if (lens_magnification == 0.0 || !std::isfinite(lens_magnification))
        throw ConfigError("lens_magnification must be finite and nonzero");
    if (lens_na < 0.0) throw ConfigError("lens_na must be >= 0");
    if (kind == ScenarioKind::same_side) {
        const auto w = wall_grid();
        const auto obs = effective_observation_patch();
        if (cyclic_overlap(illumination_patch.x, obs.x, grid.nx, w.nx) &&
            cyclic_overlap(illumination_patch.y, obs.y, grid.ny, w.ny))
            throw ConfigError("same-side: camera patch overlaps the laser spot on the wall");
    }
}

Scenario::Scenario(const ScenarioConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    wall_grid_ = cfg_.wall_grid();

    auto unit_phasors = [](const optics::PhaseScreen& s) {
        std::vector<complex> out(s.phases.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = complex(std::cos(s.phases[i]), std::sin(s.phases[i]));
        return out;
    };
    wall_ = unit_phasors(optics::make_phase_screen(wall_grid_, cfg_.wall_seed, cfg_.wall_facet));
    if (cfg_.kind == ScenarioKind::two_walls)
        wall2_ = unit_phasors(optics::make_phase_screen(wall_grid_, cfg_.wall2_seed, cfg_.wall_facet));

    std::vector<double> distances{cfg_.d_object_wall, cfg_.d_wall_camera};
    if (cfg_.kind == ScenarioKind::two_walls) distances.push_back(cfg_.d_wall_wall);
    for (double d : distances) {
        bool seen = false;
        for (const auto& p : propagators_) seen = seen || p.distance() == d;
        if (seen) continue;
        propagators_.emplace_back(cfg_.grid, d);
        if (auto w = optics::sampling_warning(cfg_.grid, d)) warnings_.push_back(*w);
    }
    if (cfg_.kind == ScenarioKind::same_side) {
        // The spherical wave is evaluated analytically on the wall plane; this is
        // the source-to-wall propagation leg.
        source_field_ = optics::point_source_field(cfg_.grid, {cfg_.source_x, cfg_.source_y, 0.0}, cfg_.d_source_wall);
    }
}

const optics::AngularSpectrumPropagator& Scenario::propagator(double distance) const {
    for (const auto& p : propagators_)
        if (p.distance() == distance) return p;
    throw ConfigError("no propagator configured for distance " + std::to_string(distance));
}

void Scenario::require_kind(ScenarioKind k) const {
    if (cfg_.kind != k)
        throw ConfigError("scenario configured as " + std::string(to_string(cfg_.kind)) + ", cannot run " +
                          std::string(to_string(k)));
}

void Scenario::apply_wall(ComplexField& field, const std::vector<complex>& wall, const optics::GridSpec& wg,
                          PatchOffset patch) const {
    const auto& g = field.grid;
    for (int iy = 0; iy < g.ny; ++iy) {
        const int sy = ((iy + patch.y) % wg.ny + wg.ny) % wg.ny;
        for (int ix = 0; ix < g.nx; ++ix) {
            const int sx = ((ix + patch.x) % wg.nx + wg.nx) % wg.nx;
            field.at(ix, iy) *= wall[static_cast<std::size_t>(sy) * wg.nx + sx];
        }
    }
}

optics::IntensityImage Scenario::camera(ComplexField field) const {
    propagator(cfg_.d_wall_camera).apply_in_place(field);
    auto image = optics::ideal_lens_image(field, {cfg_.lens_magnification, cfg_.lens_na});
    return optics::capture_intensity(image, cfg_.detection);
}

CaptureProvenance Scenario::base_provenance() const {
    CaptureProvenance p;
    p.kind = cfg_.kind;
    p.wall_seed = cfg_.wall_seed;
    if (cfg_.kind == ScenarioKind::two_walls) p.wall2_seed = cfg_.wall2_seed;
    if (cfg_.kind == ScenarioKind::rotating_wall) p.rotation_seed = cfg_.rotation_seed;
    p.version = kVersionTag;
    return p;
}

Capture Scenario::run_one_wall(const AmplitudeMask& object) const {
    require_kind(ScenarioKind::one_wall);
    ComplexField field = optics::apply_mask(optics::plane_wave(cfg_.grid, 1.0), object);
    propagator(cfg_.d_object_wall).apply_in_place(field);
    apply_wall(field, wall_, wall_grid_, cfg_.illumination_patch);
    Capture c{camera(std::move(field)), base_provenance()};
    c.provenance.patches = {cfg_.illumination_patch};
    return c;
}

Capture Scenario::run_same_side(const AmplitudeMask& object) const {
    require_kind(ScenarioKind::same_side);
    const auto observe = cfg_.effective_observation_patch();
    ComplexField field = *source_field_;
    apply_wall(field, wall_, wall_grid_, cfg_.illumination_patch);
    const auto& to_object = propagator(cfg_.d_object_wall);
    to_object.apply_in_place(field);
    field = optics::apply_mask(field, object);
    to_object.apply_in_place(field);
    apply_wall(field, wall_, wall_grid_, observe);
    Capture c{camera(std::move(field)), base_provenance()};
    c.provenance.patches = {cfg_.illumination_patch, observe};
    return c;
}

PatchOffset Scenario::rotation_patch(std::uint64_t capture_index) const {
    Engine eng(derive_seed(cfg_.rotation_seed, capture_index));
    const int x = static_cast<int>(uniform_below(eng, static_cast<std::uint64_t>(wall_grid_.nx)));
    const int y = static_cast<int>(uniform_below(eng, static_cast<std::uint64_t>(wall_grid_.ny)));
    return {x, y};
}

Capture Scenario::run_rotating_wall(const AmplitudeMask& object, std::uint64_t capture_index) const {
    require_kind(ScenarioKind::rotating_wall);
    const auto patch = rotation_patch(capture_index);
    ComplexField field = optics::apply_mask(optics::plane_wave(cfg_.grid, 1.0), object);
    propagator(cfg_.d_object_wall).apply_in_place(field);
    apply_wall(field, wall_, wall_grid_, patch);
    Capture c{camera(std::move(field)), base_provenance()};
    c.provenance.capture_index = capture_index;
    c.provenance.patches = {patch};
    return c;
}

Capture Scenario::run_two_walls(const AmplitudeMask& object) const {
    require_kind(ScenarioKind::two_walls);
    ComplexField field = optics::apply_mask(optics::plane_wave(cfg_.grid, 1.0), object);
    propagator(cfg_.d_object_wall).apply_in_place(field);
    apply_wall(field, wall_, wall_grid_, cfg_.illumination_patch);
    propagator(cfg_.d_wall_wall).apply_in_place(field);
    apply_wall(field, wall2_, wall_grid_, PatchOffset{});
    Capture c{camera(std::move(field)), base_provenance()};
    c.provenance.patches = {cfg_.illumination_patch, PatchOffset{}};
    return c;
}

Capture Scenario::run(const AmplitudeMask& object, std::uint64_t capture_index) const {
    require_same_grid(object.grid, cfg_.grid, "scenario object");
    Capture c;
    switch (cfg_.kind) {
        case ScenarioKind::one_wall: c = run_one_wall(object); break;
        case ScenarioKind::same_side: c = run_same_side(object); break;
        case ScenarioKind::rotating_wall: c = run_rotating_wall(object, capture_index); break;
        case ScenarioKind::two_walls: c = run_two_walls(object); break;
        default: throw ConfigError("unknown scenario kind");
    }
    c.provenance.capture_index = capture_index;
    return c;
}

Capture run_one_wall(const ScenarioConfig& cfg, const AmplitudeMask& object) { return Scenario(cfg).run_one_wall(object); }
Capture run_same_side(const ScenarioConfig& cfg, const AmplitudeMask& object) { return Scenario(cfg).run_same_side(object); }
Capture run_rotating_wall(const ScenarioConfig& cfg, const AmplitudeMask& object, std::uint64_t capture_index) {
    return Scenario(cfg).run_rotating_wall(object, capture_index);
}
Capture run_two_walls(const ScenarioConfig& cfg, const AmplitudeMask& object) { return Scenario(cfg).run_two_walls(object); }
Capture run(const ScenarioConfig& cfg, const AmplitudeMask& object, std::uint64_t capture_index) {
    return Scenario(cfg).run(object, capture_index);
}

ScenarioConfig config_from_provenance(const ScenarioConfig& cfg, const CaptureProvenance& prov) {
    ScenarioConfig out = cfg;
    out.kind = prov.kind;
    out.wall_seed = prov.wall_seed;
    if (prov.wall2_seed) out.wall2_seed = *prov.wall2_seed;
    if (prov.rotation_seed) out.rotation_seed = *prov.rotation_seed;
    if (prov.kind != ScenarioKind::rotating_wall && !prov.patches.empty()) out.illumination_patch = prov.patches.front();
    if (prov.kind == ScenarioKind::same_side && prov.patches.size() > 1) out.observation_patch = prov.patches[1];
    return out;
}

Capture rerun(const ScenarioConfig& cfg, const AmplitudeMask& object, const CaptureProvenance& prov) {
    Capture c = run(config_from_provenance(cfg, prov), object, prov.capture_index);
    c.provenance.object_id = prov.object_id;
    c.provenance.label = prov.label;
    return c;
}

}  // namespace nlos::scenario
