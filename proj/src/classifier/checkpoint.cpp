#include "nlos/classifier/checkpoint.hpp"

#include "nlos/error.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace nlos::classifier {
namespace {

static_assert(std::endian::native == std::endian::little, "SNET1 payload I/O assumes a little-endian host");

constexpr std::uint8_t kDtypeFloat32 = 0;

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // crc32 takes a uInt length; feed large buffers in slices.
    const std::size_t slice = 1u << 30;
    for (std::size_t pos = 0; pos < bytes.size(); pos += slice) {
        const std::size_t len = std::min(slice, bytes.size() - pos);
        crc = crc32(crc, bytes.data() + pos, static_cast<uInt>(len));
    }
    return static_cast<std::uint32_t>(crc);
}

class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out.insert(out.end(), b, b + n);
    }
    void u8(std::uint8_t v) { out.push_back(v); }
    void u16(std::uint16_t v) { bytes(&v, 2); }
    void u32(std::uint32_t v) { bytes(&v, 4); }

    std::vector<std::uint8_t> out;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> b) : buf(b) {}

    const std::uint8_t* take(std::size_t n, const char* what) {
        if (buf.size() - pos < n) throw ParseError(std::string("truncated checkpoint: missing ") + what, pos);
        const auto* p = buf.data() + pos;
        pos += n;
        return p;
    }
    std::uint8_t u8(const char* what) { return *take(1, what); }
    std::uint16_t u16(const char* what) {
        std::uint16_t v;
        std::memcpy(&v, take(2, what), 2);
        return v;
    }
    std::uint32_t u32(const char* what) {
        std::uint32_t v;
        std::memcpy(&v, take(4, what), 4);
        return v;
    }

    std::span<const std::uint8_t> buf;
    std::size_t pos = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_params(const SimpleNetParams<float>& params) {
    const auto layout = tensor_layout(params.input_size);
    const auto tensors = params.tensors();
    Writer w;
    w.bytes(kCheckpointMagic, sizeof kCheckpointMagic);
    w.u32(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(params.input_size));
    w.u32(static_cast<std::uint32_t>(layout.size()));
    for (std::size_t t = 0; t < layout.size(); ++t) {
        std::size_t elems = 1;
        for (auto d : layout[t].shape) elems *= d;
        if (elems != tensors[t].size()) throw ShapeError("tensor " + layout[t].name + " has the wrong size");
        w.u16(static_cast<std::uint16_t>(layout[t].name.size()));
        w.bytes(layout[t].name.data(), layout[t].name.size());
        w.u8(kDtypeFloat32);
        w.u8(static_cast<std::uint8_t>(layout[t].shape.size()));
        for (auto d : layout[t].shape) w.u32(d);
    }
    for (auto t : tensors) w.bytes(t.data(), t.size_bytes());
    w.u32(crc_of(w.out));
    return std::move(w.out);
}

SimpleNetParams<float> parse_params(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    const auto* magic = r.take(sizeof kCheckpointMagic, "magic");
    if (std::memcmp(magic, kCheckpointMagic, sizeof kCheckpointMagic) != 0)
        throw CorruptCheckpointError("not an SNET1 checkpoint (bad magic)");
    const std::uint32_t version = r.u32("version");
    if (version != kCheckpointVersion)
        throw CorruptCheckpointError("unsupported SNET1 version " + std::to_string(version));
    const std::uint32_t input_size = r.u32("input size");
    const std::uint32_t count = r.u32("tensor count");

    std::vector<TensorInfo> table;
    for (std::uint32_t t = 0; t < count && t < 64; ++t) {
        TensorInfo info;
        const std::uint16_t len = r.u16("tensor name length");
        const auto* name = r.take(len, "tensor name");
        info.name.assign(reinterpret_cast<const char*>(name), len);
        if (r.u8("dtype") != kDtypeFloat32) throw CorruptCheckpointError("tensor " + info.name + " is not float32");
        const std::uint8_t rank = r.u8("rank");
        for (std::uint8_t d = 0; d < rank; ++d) info.shape.push_back(r.u32("dimension"));
        table.push_back(std::move(info));
    }

    std::vector<TensorInfo> expected;
    try {
        expected = tensor_layout(static_cast<int>(input_size));
    } catch (const ConfigError&) {
        throw CorruptCheckpointError("implausible input size " + std::to_string(input_size));
    }
    if (count != expected.size()) throw CorruptCheckpointError("unexpected tensor count " + std::to_string(count));
    for (std::size_t t = 0; t < table.size(); ++t)
        if (table[t].name != expected[t].name || table[t].shape != expected[t].shape)
            throw CorruptCheckpointError("tensor table entry " + std::to_string(t) + " (" + table[t].name +
                                         ") does not match the SimpleNet layout");

    auto params = zero_params<float>(static_cast<int>(input_size));
    for (auto t : params.tensors()) std::memcpy(t.data(), r.take(t.size_bytes(), "tensor payload"), t.size_bytes());
    const std::size_t body = r.pos;
    const std::uint32_t stored = r.u32("CRC32");
    if (r.pos != bytes.size()) throw CorruptCheckpointError("trailing bytes after CRC32");
    if (stored != crc_of(bytes.first(body))) throw CorruptCheckpointError("CRC32 mismatch");
    return params;
}

void save_params(const SimpleNetParams<float>& params, const std::filesystem::path& path) {
    const auto bytes = serialize_params(params);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

SimpleNetParams<float> load_params(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_params(bytes);
}

}  // namespace nlos::classifier
