#include "ckkstream/serialize.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cks {

namespace {

constexpr uint32_t kMagic = 0x31534b43;  // "CKS1"
constexpr uint16_t kVersion = 1;

enum class Kind : uint8_t { Plaintext = 1, Ciphertext = 2, Keys = 3, Message = 4 };

void put_u8(std::string& out, uint8_t v) { out.push_back((char)v); }
void put_u16(std::string& out, uint16_t v) {
    out.push_back((char)(v & 0xff));
    out.push_back((char)(v >> 8));
}
void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((char)((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back((char)((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& out, double v) {
    uint64_t u;
    std::memcpy(&u, &v, 8);
    put_u64(out, u);
}

class Reader {
public:
    explicit Reader(std::string data) : data_(std::move(data)) {}
    uint8_t u8() { return (uint8_t)take(1)[0]; }
    uint16_t u16() {
        const auto* p = take(2);
        return (uint16_t)((uint8_t)p[0] | ((uint16_t)(uint8_t)p[1] << 8));
    }
    uint32_t u32() {
        uint32_t v = 0;
        const auto* p = take(4);
        for (int i = 3; i >= 0; --i) v = (v << 8) | (uint8_t)p[i];
        return v;
    }
    uint64_t u64() {
        uint64_t v = 0;
        const auto* p = take(8);
        for (int i = 7; i >= 0; --i) v = (v << 8) | (uint8_t)p[i];
        return v;
    }
    double f64() {
        const uint64_t u = u64();
        double v;
        std::memcpy(&v, &u, 8);
        return v;
    }
    bool done() const { return pos_ == data_.size(); }

private:
    const char* take(size_t n) {
        if (pos_ + n > data_.size()) throw std::runtime_error("container truncated");
        const char* p = data_.data() + pos_;
        pos_ += n;
        return p;
    }
    std::string data_;
    size_t pos_ = 0;
};

void encode_poly(std::string& out, const RnsPolynomial& poly) {
    put_u32(out, poly.degree);
    put_u8(out, (uint8_t)poly.domain);
    put_u8(out, (uint8_t)poly.ordering);
    put_u16(out, (uint16_t)poly.limb_count());
    for (uint64_t q : poly.prime_ids) put_u64(out, q);
    for (const auto& limb : poly.limbs)
        for (uint64_t c : limb) put_u64(out, c);
}

RnsPolynomial decode_poly(Reader& r) {
    RnsPolynomial poly;
    poly.degree = r.u32();
    poly.domain = (PolyDomain)r.u8();
    poly.ordering = (PolyOrdering)r.u8();
    const uint16_t limbs = r.u16();
    poly.prime_ids.resize(limbs);
    for (auto& q : poly.prime_ids) q = r.u64();
    poly.limbs.resize(limbs);
    for (auto& limb : poly.limbs) {
        limb.resize(poly.degree);
        for (auto& c : limb) c = r.u64();
    }
    return poly;
}

void write_header(std::string& out, Kind kind) {
    put_u32(out, kMagic);
    put_u16(out, kVersion);
    put_u8(out, (uint8_t)kind);
    put_u8(out, 0);
}

Reader read_file(const std::string& path, Kind expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    Reader r(ss.str());
    if (r.u32() != kMagic) throw std::runtime_error(path + ": not a ckkstream container");
    if (r.u16() != kVersion) throw std::runtime_error(path + ": unsupported container version");
    const uint8_t kind = r.u8();
    r.u8();
    if (kind != (uint8_t)expected) throw std::runtime_error(path + ": wrong container kind");
    return r;
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(data.data(), (std::streamsize)data.size());
    if (!out) throw std::runtime_error("short write to " + path);
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::vector<uint8_t> plaintext_bytes(const Plaintext& pt) {
    std::string out;
    write_header(out, Kind::Plaintext);
    put_f64(out, pt.scale);
    put_u16(out, (uint16_t)pt.level);
    encode_poly(out, pt.poly);
    return {out.begin(), out.end()};
}

void save_plaintext(const Plaintext& pt, const std::string& path) {
    const auto bytes = plaintext_bytes(pt);
    write_file(path, std::string(bytes.begin(), bytes.end()));
}

Plaintext load_plaintext(const std::string& path) {
    Reader r = read_file(path, Kind::Plaintext);
    Plaintext pt;
    pt.scale = r.f64();
    pt.level = r.u16();
    pt.poly = decode_poly(r);
    return pt;
}

std::vector<uint8_t> ciphertext_bytes(const Ciphertext& ct) {
    std::string out;
    write_header(out, Kind::Ciphertext);
    put_f64(out, ct.scale);
    put_u16(out, (uint16_t)ct.level);
    encode_poly(out, ct.c0);
    encode_poly(out, ct.c1);
    return {out.begin(), out.end()};
}

void save_ciphertext(const Ciphertext& ct, const std::string& path) {
    const auto bytes = ciphertext_bytes(ct);
    write_file(path, std::string(bytes.begin(), bytes.end()));
}

Ciphertext load_ciphertext(const std::string& path) {
    Reader r = read_file(path, Kind::Ciphertext);
    Ciphertext ct;
    ct.scale = r.f64();
    ct.level = r.u16();
    ct.c0 = decode_poly(r);
    ct.c1 = decode_poly(r);
    return ct;
}

void save_keys(const KeyMaterial& keys, const std::string& path) {
    std::string out;
    write_header(out, Kind::Keys);
    for (uint8_t b : keys.seed.bytes) put_u8(out, b);
    encode_poly(out, keys.sk);
    encode_poly(out, keys.pk0);
    encode_poly(out, keys.pk1);
    write_file(path, out);
}

KeyMaterial load_keys(const std::string& path) {
    Reader r = read_file(path, Kind::Keys);
    KeyMaterial keys;
    for (auto& b : keys.seed.bytes) b = r.u8();
    keys.sk = decode_poly(r);
    keys.pk0 = decode_poly(r);
    keys.pk1 = decode_poly(r);
    return keys;
}

void save_message(const std::vector<RedComplex>& slots, const std::string& path) {
    if (has_suffix(path, ".csv")) {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path);
        out.precision(17);
        for (const auto& z : slots) out << z.re << "," << z.im << "\n";
        return;
    }
    std::string out;
    write_header(out, Kind::Message);
    put_u32(out, (uint32_t)slots.size());
    for (const auto& z : slots) {
        put_f64(out, z.re);
        put_f64(out, z.im);
    }
    write_file(path, out);
}

std::vector<RedComplex> load_message(const std::string& path) {
    if (has_suffix(path, ".csv")) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        std::vector<RedComplex> slots;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error(path + ": expected re,im lines");
            RedComplex z;
            z.re = std::stod(line.substr(0, comma));
            z.im = std::stod(line.substr(comma + 1));
            slots.push_back(z);
        }
        return slots;
    }
    Reader r = read_file(path, Kind::Message);
    std::vector<RedComplex> slots(r.u32());
    for (auto& z : slots) {
        z.re = r.f64();
        z.im = r.f64();
    }
    return slots;
}

}  // namespace cks
