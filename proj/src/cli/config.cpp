#include "nlos/cli/config.hpp"

#include "nlos/error.hpp"
#include "nlos/random.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nlos::cli {

const Settings& default_settings() {
    static const Settings defaults = [] {
        const scenario::ScenarioConfig sc;
        const dataset::PreprocessConfig pre;
        const classifier::TrainConfig tr;
        auto num = [](double v) {
            std::ostringstream os;
            os.precision(17);
            os << v;
            return os.str();
        };
        return Settings{
            {"data.images", "data/mnist/images-idx3-ubyte"},
            {"data.labels", "data/mnist/labels-idx1-ubyte"},
            {"data.count", "10000"},

            {"scenario.kind", "one-wall"},
            {"scenario.nx", std::to_string(sc.grid.nx)},
            {"scenario.ny", std::to_string(sc.grid.ny)},
            {"scenario.pitch", num(sc.grid.pitch)},
            {"scenario.wavelength", num(sc.grid.wavelength)},
            {"scenario.d_object_wall", num(sc.d_object_wall)},
            {"scenario.d_wall_camera", num(sc.d_wall_camera)},
            {"scenario.d_wall_wall", num(sc.d_wall_wall)},
            {"scenario.d_source_wall", num(sc.d_source_wall)},
            {"scenario.source_x", num(sc.source_x)},
            {"scenario.source_y", num(sc.source_y)},
            {"scenario.object_size", num(sc.object_size)},
            {"scenario.wall_seed", ""},
            {"scenario.wall2_seed", ""},
            {"scenario.rotation_seed", ""},
            {"scenario.wall_scale", std::to_string(sc.wall_scale)},
            {"scenario.wall_facet", std::to_string(sc.wall_facet)},
            {"scenario.illumination_x", "0"},
            {"scenario.illumination_y", "0"},
            {"scenario.observation_x", ""},
            {"scenario.observation_y", ""},
            {"scenario.lens_magnification", num(sc.lens_magnification)},
            {"scenario.lens_na", num(sc.lens_na)},
            {"scenario.detection", "modulus"},

            {"preprocess.crop_size", std::to_string(pre.crop_size)},
            {"preprocess.anchor", std::string(dataset::to_string(pre.anchor))},
            {"preprocess.crop_x", "0"},
            {"preprocess.crop_y", "0"},
            {"preprocess.noise_sigma", num(pre.noise_sigma)},
            {"preprocess.noise_seed", ""},
            {"preprocess.binarize", "true"},
            {"preprocess.binarize_threshold", num(pre.binarize_threshold)},

            {"train.batch_size", std::to_string(tr.batch_size)},
            {"train.epochs", std::to_string(tr.epochs)},
            {"train.learning_rate", num(tr.learning_rate)},
            {"train.optimizer", classifier::to_string(tr.optimizer)},
            {"train.init_seed", ""},
            {"train.shuffle_seed", ""},
            {"train.train_fraction", "0.95"},
            {"train.split_seed", ""},

            {"output.dataset", "dataset.spkl"},
            {"output.checkpoint", "model.snet"},
            {"output.log", ""},
            {"output.report", "report.json"},

            {"run.seed", "1"},
            {"run.threads", "0"},
        };
    }();
    return defaults;
}

namespace {

void require_known(const std::string& key) {
    if (!default_settings().contains(key)) throw ConfigError("unknown configuration key '" + key + "'");
}

Settings from_ptree(const boost::property_tree::ptree& tree) {
    Settings out;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("configuration key '" + section + "' must be inside a [section]");
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            require_known(full);
            out[full] = value.data();
        }
    }
    return out;
}

template <typename T>
T parse_integer(const std::string& key, const std::string& text) {
    T v{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError("bad integer for " + key + ": '" + text + "'");
    return v;
}

double parse_real(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": '" + text + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError("bad boolean for " + key + ": '" + text + "'");
}

class Reader {
public:
    explicit Reader(const Settings& s) : s_(s) {}

    const std::string& str(const std::string& key) const {
        const auto it = s_.find(key);
        if (it == s_.end()) throw ConfigError("missing configuration key '" + key + "'");
        return it->second;
    }
    bool has(const std::string& key) const { return !str(key).empty(); }
    int i32(const std::string& key) const { return parse_integer<int>(key, str(key)); }
    std::uint64_t u64(const std::string& key) const { return parse_integer<std::uint64_t>(key, str(key)); }
    double real(const std::string& key) const { return parse_real(key, str(key)); }
    bool flag(const std::string& key) const { return parse_bool(key, str(key)); }

    std::uint64_t seed(const std::string& key, std::uint64_t master, SeedSlot slot) const {
        return has(key) ? u64(key) : derive_seed(master, static_cast<std::uint64_t>(slot));
    }

private:
    const Settings& s_;
};

}  // namespace

Settings parse_config_text(const std::string& text) {
    std::istringstream in(text);
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("configuration file: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    return from_ptree(tree);
}

Settings read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open configuration file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

Settings merge_settings(const Settings& file, const Settings& flags) {
    Settings out = default_settings();
    for (const auto& layer : {&file, &flags})
        for (const auto& [k, v] : *layer) {
            require_known(k);
            out[k] = v;
        }
    return out;
}

RunConfig build_run_config(const Settings& merged) {
    const Reader r(merged);
    RunConfig c;
    c.seed = r.u64("run.seed");
    c.threads = r.i32("run.threads");
    if (c.threads < 0) throw ConfigError("run.threads must be >= 0");

    c.mnist_images = r.str("data.images");
    c.mnist_labels = r.str("data.labels");
    c.count = r.u64("data.count");
    if (c.count == 0) throw ConfigError("data.count must be >= 1");

    auto& s = c.scenario;
    s.kind = scenario::parse_kind(r.str("scenario.kind"));
    s.grid.nx = r.i32("scenario.nx");
    s.grid.ny = r.i32("scenario.ny");
    s.grid.pitch = r.real("scenario.pitch");
    s.grid.wavelength = r.real("scenario.wavelength");
    s.d_object_wall = r.real("scenario.d_object_wall");
    s.d_wall_camera = r.real("scenario.d_wall_camera");
    s.d_wall_wall = r.real("scenario.d_wall_wall");
    s.d_source_wall = r.real("scenario.d_source_wall");
    s.source_x = r.real("scenario.source_x");
    s.source_y = r.real("scenario.source_y");
    s.object_size = r.real("scenario.object_size");
    s.wall_seed = r.seed("scenario.wall_seed", c.seed, SeedSlot::wall);
    s.wall2_seed = r.seed("scenario.wall2_seed", c.seed, SeedSlot::wall2);
    s.rotation_seed = r.seed("scenario.rotation_seed", c.seed, SeedSlot::rotation);
    s.wall_scale = r.i32("scenario.wall_scale");
    s.wall_facet = r.i32("scenario.wall_facet");
    s.illumination_patch = {r.i32("scenario.illumination_x"), r.i32("scenario.illumination_y")};
    if (r.has("scenario.observation_x") != r.has("scenario.observation_y"))
        throw ConfigError("scenario.observation_x and scenario.observation_y must be set together");
    if (r.has("scenario.observation_x"))
        s.observation_patch = scenario::PatchOffset{r.i32("scenario.observation_x"), r.i32("scenario.observation_y")};
    s.lens_magnification = r.real("scenario.lens_magnification");
    s.lens_na = r.real("scenario.lens_na");
    const auto& det = r.str("scenario.detection");
    if (det == "modulus")
        s.detection = optics::DetectionMode::modulus_squared;
    else if (det == "real-part")
        s.detection = optics::DetectionMode::real_part_squared;
    else
        throw ConfigError("bad scenario.detection '" + det + "' (expected modulus or real-part)");
    s.validate();

    auto& p = c.preprocess;
    p.crop_size = r.i32("preprocess.crop_size");
    p.anchor = dataset::parse_anchor(r.str("preprocess.anchor"));
    p.crop_x = r.i32("preprocess.crop_x");
    p.crop_y = r.i32("preprocess.crop_y");
    p.noise_sigma = r.real("preprocess.noise_sigma");
    p.binarize = r.flag("preprocess.binarize");
    p.binarize_threshold = r.real("preprocess.binarize_threshold");
    p.validate();
    c.noise_seed_stream = r.seed("preprocess.noise_seed", c.seed, SeedSlot::noise);

    auto& t = c.train;
    t.batch_size = r.i32("train.batch_size");
    t.epochs = r.i32("train.epochs");
    t.learning_rate = r.real("train.learning_rate");
    t.optimizer = classifier::parse_optimizer(r.str("train.optimizer"));
    t.init_seed = r.seed("train.init_seed", c.seed, SeedSlot::init);
    t.shuffle_seed = r.seed("train.shuffle_seed", c.seed, SeedSlot::shuffle);
    t.validate();
    c.train_fraction = r.real("train.train_fraction");
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) throw ConfigError("train.train_fraction must lie in (0, 1)");
    c.split_seed = r.seed("train.split_seed", c.seed, SeedSlot::split);

    c.dataset_path = r.str("output.dataset");
    c.checkpoint_path = r.str("output.checkpoint");
    c.log_path = r.str("output.log");
    c.report_path = r.str("output.report");
    return c;
}

}  // namespace nlos::cli
