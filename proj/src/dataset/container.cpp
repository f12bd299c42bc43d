#include "nlos/dataset/container.hpp"

#include "nlos/dataset/json.hpp"
#include "nlos/error.hpp"
#include "nlos/version.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace nlos::dataset {
namespace {

static_assert(std::endian::native == std::endian::little, "SPKL1 payload I/O assumes a little-endian host");
static_assert(sizeof(float) == 4);

constexpr int kFormatVersion = 1;

}  // namespace

void write_dataset(std::ostream& out, const Dataset& ds) {
    const int size = ds.image_size();
    const std::size_t pixels = static_cast<std::size_t>(size) * size;
    nlohmann::json header{{"format", "SPKL1"},
                          {"version", kFormatVersion},
                          {"software", kVersionTag},
                          {"record_count", ds.records.size()},
                          {"width", size},
                          {"height", size},
                          {"dtype", "float32-le"},
                          {"seed_stream", ds.seed_stream},
                          {"scenario", ds.scenario},
                          {"preprocess", ds.preprocess}};
    out.write(kDatasetMagic, sizeof(kDatasetMagic) - 1);
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        const auto& r = ds.records[i];
        if (r.image.values.size() != pixels) throw ShapeError("record " + std::to_string(i) + " has the wrong image size");
        nlohmann::json line{{"id", i}, {"label", r.label}, {"noise_seed", r.noise_seed}, {"provenance", r.provenance}};
        out << line.dump() << '\n';
    }
    std::vector<float> buf(pixels);
    for (const auto& r : ds.records) {
        for (std::size_t k = 0; k < pixels; ++k) buf[k] = static_cast<float>(r.image.values[k]);
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(pixels * sizeof(float)));
    }
    if (!out) throw IoError("failed writing dataset");
}

Dataset read_dataset(std::istream& in) {
    std::uint64_t offset = 0;
    char magic[sizeof(kDatasetMagic) - 1];
    if (!in.read(magic, sizeof magic)) throw ParseError("truncated dataset magic", 0);
    if (std::memcmp(magic, kDatasetMagic, sizeof magic) != 0) throw ParseError("not an SPKL1 dataset (bad magic)", 0);
    offset += sizeof magic;

    auto next_json = [&](const char* what) {
        std::string line;
        if (!std::getline(in, line)) throw ParseError(std::string("truncated dataset: missing ") + what, offset);
        try {
            auto j = nlohmann::json::parse(line);
            offset += line.size() + 1;
            return j;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("malformed ") + what + ": " + e.what(), offset);
        }
    };

    const auto header = next_json("header");
    Dataset ds;
    std::size_t count = 0;
    int width = 0, height = 0;
    try {
        if (header.at("format").get<std::string>() != "SPKL1") throw ParseError("header format is not SPKL1", sizeof magic);
        if (header.at("version").get<int>() != kFormatVersion) throw ParseError("unsupported SPKL1 version", sizeof magic);
        if (header.at("dtype").get<std::string>() != "float32-le") throw ParseError("unsupported payload dtype", sizeof magic);
        count = header.at("record_count").get<std::size_t>();
        width = header.at("width").get<int>();
        height = header.at("height").get<int>();
        ds.seed_stream = header.at("seed_stream").get<std::uint64_t>();
        ds.scenario = header.at("scenario").get<scenario::ScenarioConfig>();
        ds.preprocess = header.at("preprocess").get<PreprocessConfig>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad dataset header: ") + e.what(), sizeof magic);
    }
    if (width != ds.preprocess.crop_size || height != ds.preprocess.crop_size)
        throw ParseError("header image size disagrees with the crop size", sizeof magic);

    optics::GridSpec grid = ds.scenario.grid;
    grid.nx = width;
    grid.ny = height;
    ds.records.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t line_offset = offset;
        const auto j = next_json("record line");
        auto& r = ds.records[i];
        try {
            if (j.at("id").get<std::size_t>() != i) throw ParseError("record ids out of order", line_offset);
            r.label = j.at("label").get<int>();
            r.noise_seed = j.at("noise_seed").get<std::uint64_t>();
            r.provenance = j.at("provenance").get<scenario::CaptureProvenance>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad record line: ") + e.what(), line_offset);
        }
    }

    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    std::vector<float> buf(pixels);
    for (std::size_t i = 0; i < count; ++i) {
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels * sizeof(float)));
        if (static_cast<std::size_t>(in.gcount()) != pixels * sizeof(float))
            throw ParseError("truncated payload of record " + std::to_string(i), offset + static_cast<std::uint64_t>(in.gcount()));
        offset += pixels * sizeof(float);
        auto& img = ds.records[i].image;
        img = optics::IntensityImage(grid);
        for (std::size_t k = 0; k < pixels; ++k) img.values[k] = buf[k];
    }
    if (in.peek() != std::char_traits<char>::eof()) throw ParseError("trailing bytes after payload", offset);
    return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    write_dataset(out, ds);
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_dataset(in);
}

}  // namespace nlos::dataset
