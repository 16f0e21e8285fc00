#include "ckkstream/paramfile.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cks {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

template <typename T>
T get_or(const KvMap& kv, const std::string& key, T fallback);

template <>
double get_or(const KvMap& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
}
template <>
uint32_t get_or(const KvMap& kv, const std::string& key, uint32_t fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : (uint32_t)std::stoul(it->second);
}
template <>
uint64_t get_or(const KvMap& kv, const std::string& key, uint64_t fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : (uint64_t)std::stoull(it->second);
}
template <>
bool get_or(const KvMap& kv, const std::string& key, bool fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    return it->second == "1" || it->second == "true" || it->second == "yes";
}
template <>
std::string get_or(const KvMap& kv, const std::string& key, std::string fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

}  // namespace

KvMap read_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    KvMap kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ": expected key=value, got '" + line + "'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

CkksParams ckks_params_from_kv(const KvMap& kv) {
    CkksParams p;
    p.log_n = get_or(kv, "log_n", p.log_n);
    p.prime_bits = get_or(kv, "prime_bits", p.prime_bits);
    p.levels = get_or(kv, "levels", p.levels);
    if (kv.count("scale_bits"))
        p.scale = std::ldexp(1.0, (int)get_or(kv, "scale_bits", (uint32_t)36));
    else
        p.scale = get_or(kv, "scale", p.scale);
    p.sigma = get_or(kv, "sigma", p.sigma);
    return p;
}

SimConfig sim_config_from_kv(const KvMap& kv) {
    SimConfig cfg;
    cfg.clock_hz = get_or(kv, "clock_hz", cfg.clock_hz);
    cfg.dram_bytes_per_sec = get_or(kv, "dram_bytes_per_sec", cfg.dram_bytes_per_sec);
    cfg.dram_burst_bytes = get_or(kv, "dram_burst_bytes", cfg.dram_burst_bytes);
    cfg.lanes_per_pnl = get_or(kv, "lanes", cfg.lanes_per_pnl);
    cfg.pnl_per_rsc = get_or(kv, "pnl_per_rsc", cfg.pnl_per_rsc);
    cfg.rsc_count = get_or(kv, "rsc_count", cfg.rsc_count);
    cfg.global_scratch_bytes = get_or(kv, "global_scratch_bytes", cfg.global_scratch_bytes);
    cfg.word_bits_int = get_or(kv, "word_bits_int", cfg.word_bits_int);
    cfg.word_bits_fp = get_or(kv, "word_bits_fp", cfg.word_bits_fp);
    cfg.mult_latency = get_or(kv, "mult_latency", cfg.mult_latency);
    cfg.mse_latency = get_or(kv, "mse_latency", cfg.mse_latency);
    const std::string mode = get_or(kv, "mode", std::string("dual_encrypt"));
    if (mode == "dual_encrypt")
        cfg.mode = SimMode::DualEncrypt;
    else if (mode == "dual_decrypt")
        cfg.mode = SimMode::DualDecrypt;
    else if (mode == "mixed")
        cfg.mode = SimMode::Mixed;
    else
        throw std::runtime_error("unknown mode '" + mode + "'");
    cfg.onchip.twiddles = get_or(kv, "onchip_twiddles", cfg.onchip.twiddles);
    cfg.onchip.randoms = get_or(kv, "onchip_randoms", cfg.onchip.randoms);
    const std::string fetch = get_or(kv, "twiddle_fetch", std::string("per_pass"));
    if (fetch == "per_pass")
        cfg.twiddle_fetch = TwiddleFetch::PerPass;
    else if (fetch == "per_limb")
        cfg.twiddle_fetch = TwiddleFetch::PerLimb;
    else
        throw std::runtime_error("unknown twiddle_fetch '" + fetch + "'");
    cfg.twiddle_buffer_words = get_or(kv, "twiddle_buffer_words", cfg.twiddle_buffer_words);
    cfg.decrypt_level = get_or(kv, "decrypt_level", cfg.decrypt_level);
    cfg.params = ckks_params_from_kv(kv);
    return cfg;
}

WorkloadSpec workload_from_kv(const KvMap& kv) {
    WorkloadSpec wl;
    wl.n_encrypt = get_or(kv, "n_encrypt", wl.n_encrypt);
    wl.n_decrypt = get_or(kv, "n_decrypt", wl.n_decrypt);
    return wl;
}

std::string ckks_params_to_kv(const CkksParams& params) {
    std::ostringstream os;
    os << "log_n=" << params.log_n << "\n";
    os << "prime_bits=" << params.prime_bits << "\n";
    os << "levels=" << params.levels << "\n";
    os.precision(17);
    os << "scale=" << params.scale << "\n";
    os << "sigma=" << params.sigma << "\n";
    return os.str();
}

std::string sim_config_to_kv(const SimConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "clock_hz=" << cfg.clock_hz << "\n";
    os << "dram_bytes_per_sec=" << cfg.dram_bytes_per_sec << "\n";
    os << "dram_burst_bytes=" << cfg.dram_burst_bytes << "\n";
    os << "lanes=" << cfg.lanes_per_pnl << "\n";
    os << "pnl_per_rsc=" << cfg.pnl_per_rsc << "\n";
    os << "rsc_count=" << cfg.rsc_count << "\n";
    os << "global_scratch_bytes=" << cfg.global_scratch_bytes << "\n";
    os << "word_bits_int=" << cfg.word_bits_int << "\n";
    os << "word_bits_fp=" << cfg.word_bits_fp << "\n";
    os << "mult_latency=" << cfg.mult_latency << "\n";
    os << "mse_latency=" << cfg.mse_latency << "\n";
    os << "mode="
       << (cfg.mode == SimMode::DualEncrypt
               ? "dual_encrypt"
               : cfg.mode == SimMode::DualDecrypt ? "dual_decrypt" : "mixed")
       << "\n";
    os << "onchip_twiddles=" << (cfg.onchip.twiddles ? 1 : 0) << "\n";
    os << "onchip_randoms=" << (cfg.onchip.randoms ? 1 : 0) << "\n";
    os << "twiddle_fetch="
       << (cfg.twiddle_fetch == TwiddleFetch::PerPass ? "per_pass" : "per_limb") << "\n";
    os << "twiddle_buffer_words=" << cfg.twiddle_buffer_words << "\n";
    os << "decrypt_level=" << cfg.decrypt_level << "\n";
    os << ckks_params_to_kv(cfg.params);
    return os.str();
}

}  // namespace cks
