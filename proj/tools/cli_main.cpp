// ckkstream command-line tool. Talks to the shared library exclusively
// through the C API in ckkstream.h; artifacts carry run manifests.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ckkstream.h"
#include "sha256.hpp"

namespace {

using nlohmann::json;

[[noreturn]] void die(cks_status status, const std::string& where) {
    std::cerr << "error: " << where << ": " << cks_status_name(status) << " ("
              << cks_last_error() << ")\n";
    std::exit(1);
}

void check(cks_status status, const std::string& where) {
    if (status != CKS_OK) die(status, where);
}

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        std::exit(1);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string params_snapshot(const cks_params& p) {
    std::ostringstream os;
    os.precision(17);
    os << "log_n=" << p.log_n << "\nprime_bits=" << p.prime_bits << "\nlevels=" << p.levels
       << "\nscale=" << p.scale << "\nsigma=" << p.sigma << "\n";
    return os.str();
}

struct Manifest {
    std::string command_line;
    std::string config_snapshot;
    std::string seed_hex;
    std::vector<std::pair<std::string, std::string>> artifacts;  // path, sha256

    // identity of the run: everything that determines the outputs
    std::string hash() const {
        return clitool::Sha256::of(std::string(cks_version()) + "\n" + command_line + "\n" +
                                   config_snapshot + "\n" + seed_hex);
    }

    json to_json() const {
        json j;
        j["tool_version"] = cks_version();
        j["command_line"] = command_line;
        j["config_snapshot"] = config_snapshot;
        j["seed"] = seed_hex;
        j["manifest_hash"] = hash();
        json arts = json::array();
        for (const auto& [path, digest] : artifacts)
            arts.push_back({{"path", path}, {"sha256", digest}});
        j["artifacts"] = arts;
        return j;
    }

    void add_artifact(const std::string& path) {
        artifacts.emplace_back(path, clitool::Sha256::of(file_bytes(path)));
    }

    void save(const std::string& primary_out) const {
        const std::string path = primary_out + ".manifest.json";
        std::ofstream out(path, std::ios::trunc);
        out << to_json().dump(2) << "\n";
    }
};

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += " ";
        s += argv[i];
    }
    return s;
}

void write_csv(const std::string& path, const Manifest& manifest, const std::string& header,
               const std::vector<std::string>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(1);
    }
    out << "# manifest " << manifest.hash() << "\n";
    out << header << "\n";
    for (const auto& row : rows) out << row << "\n";
}

cks_params load_params(const std::string& params_file) {
    cks_params p;
    cks_params_default(&p);
    if (!params_file.empty()) check(cks_params_from_file(params_file.c_str(), &p), "params");
    return p;
}

cks_sim_config load_sim_config(const std::string& config_file) {
    cks_sim_config cfg;
    cks_sim_config_default(&cfg);
    if (!config_file.empty())
        check(cks_sim_config_from_file(config_file.c_str(), &cfg), "sim config");
    return cfg;
}

std::string sim_snapshot(const cks_sim_config& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "clock_hz=" << cfg.clock_hz << "\ndram_bytes_per_sec=" << cfg.dram_bytes_per_sec
       << "\nlanes=" << cfg.lanes_per_pnl << "\npnl_per_rsc=" << cfg.pnl_per_rsc
       << "\nrsc_count=" << cfg.rsc_count << "\nmode=" << (int)cfg.mode
       << "\nonchip_twiddles=" << cfg.onchip_twiddles
       << "\nonchip_randoms=" << cfg.onchip_randoms
       << "\ntwiddle_fetch_per_pass=" << cfg.twiddle_fetch_per_pass
       << "\ntwiddle_buffer_words=" << cfg.twiddle_buffer_words
       << "\ndecrypt_level=" << cfg.decrypt_level << "\n"
       << params_snapshot(cfg.params);
    return os.str();
}

std::vector<uint32_t> parse_lane_list(const std::string& text) {
    std::vector<uint32_t> lanes;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) lanes.push_back((uint32_t)std::stoul(part));
    return lanes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ckkstream: client-side CKKS pipeline, design explorer and streaming simulator"};
    app.require_subcommand(1);

    const std::string default_seed = "000102030405060708090a0b0c0d0e0f";
    std::string params_file, seed = default_seed, out, in_file, keys_file, msg_file;
    uint32_t mantissa_bits = 52;

    // primes enumerate
    auto* primes = app.add_subcommand("primes", "NTT-friendly prime tooling");
    auto* prime_enum = primes->add_subcommand("enumerate", "enumerate primes of the friendly form");
    std::string bits_range = "32..36";
    uint32_t prime_logn = 16;
    std::string prime_out;
    prime_enum->add_option("--bits", bits_range, "bit range LO..HI");
    prime_enum->add_option("--logn", prime_logn, "transform size exponent n (N = 2^n)");
    prime_enum->add_option("--out", prime_out, "output record file");

    auto add_common = [&](CLI::App* cmd, bool with_mantissa = false) {
        cmd->add_option("--params", params_file, "key=value parameter file");
        cmd->add_option("--seed", seed, "128-bit hex seed");
        if (with_mantissa) cmd->add_option("--mantissa-bits", mantissa_bits, "FFT mantissa width");
    };

    auto* keygen_cmd = app.add_subcommand("keygen", "generate key material from a seed");
    add_common(keygen_cmd);
    keygen_cmd->add_option("--out", out, "keys output file")->required();

    auto* encode_cmd = app.add_subcommand("encode", "encode a message file into a plaintext");
    add_common(encode_cmd, true);
    encode_cmd->add_option("--message", msg_file, "message file (csv or binary)")->required();
    encode_cmd->add_option("--out", out, "plaintext output")->required();

    auto* encrypt_cmd = app.add_subcommand("encrypt", "encrypt a plaintext");
    add_common(encrypt_cmd);
    encrypt_cmd->add_option("--keys", keys_file, "key material")->required();
    encrypt_cmd->add_option("--in", in_file, "plaintext input")->required();
    encrypt_cmd->add_option("--out", out, "ciphertext output")->required();

    auto* decrypt_cmd = app.add_subcommand("decrypt", "decrypt a ciphertext");
    add_common(decrypt_cmd);
    decrypt_cmd->add_option("--keys", keys_file, "key material")->required();
    decrypt_cmd->add_option("--in", in_file, "ciphertext input")->required();
    decrypt_cmd->add_option("--out", out, "plaintext output")->required();

    auto* decode_cmd = app.add_subcommand("decode", "decode a plaintext into a message file");
    add_common(decode_cmd, true);
    decode_cmd->add_option("--in", in_file, "plaintext input")->required();
    decode_cmd->add_option("--out", out, "message output (csv or binary)")->required();

    auto* sweep_cmd = app.add_subcommand("sweep-precision", "mantissa-bits precision sweep");
    add_common(sweep_cmd);
    uint32_t sweep_lo = 20, sweep_hi = 52, sweep_step = 4, sweep_trials = 8;
    sweep_cmd->add_option("--lo", sweep_lo, "lowest mantissa width");
    sweep_cmd->add_option("--hi", sweep_hi, "highest mantissa width");
    sweep_cmd->add_option("--step", sweep_step, "step");
    sweep_cmd->add_option("--trials", sweep_trials, "messages per point");
    sweep_cmd->add_option("--out", out, "CSV output")->required();

    auto* account_cmd = app.add_subcommand("account-memory", "external-storage accountant");
    add_common(account_cmd);
    uint32_t coeff_bits = 44;
    bool acc_tw = false, acc_rand = false;
    account_cmd->add_option("--coeff-bits", coeff_bits, "storage word width in bits");
    account_cmd->add_flag("--onchip-twiddles", acc_tw, "generate twiddles on-chip");
    account_cmd->add_flag("--onchip-randoms", acc_rand, "generate masks/errors/keys on-chip");
    account_cmd->add_option("--out", out, "CSV output (stdout when absent)");

    auto* explore_cmd = app.add_subcommand("explore", "design-space multiplier counts");
    uint32_t explore_lanes = 8, explore_logn = 16;
    explore_cmd->add_option("--lanes", explore_lanes, "parallel lanes P");
    explore_cmd->add_option("--logn", explore_logn, "transform size exponent");
    explore_cmd->add_option("--out", out, "CSV output")->required();

    std::string sim_config_file, workload_file, report_file;
    auto* simulate_cmd = app.add_subcommand("simulate", "run the streaming-architecture simulator");
    simulate_cmd->add_option("--config", sim_config_file, "simulator key=value config");
    simulate_cmd->add_option("--workload", workload_file, "workload key=value file");
    simulate_cmd->add_option("--report", report_file, "JSON report output")->required();
    uint64_t wl_enc = 1, wl_dec = 0;
    simulate_cmd->add_option("--n-encrypt", wl_enc, "encrypt count (when no workload file)");
    simulate_cmd->add_option("--n-decrypt", wl_dec, "decrypt count (when no workload file)");

    auto* lane_cmd = app.add_subcommand("lane-sweep", "throughput versus lane count");
    std::string lane_list = "2,4,8,16";
    lane_cmd->add_option("--config", sim_config_file, "simulator config");
    lane_cmd->add_option("--lanes", lane_list, "comma-separated lane options");
    lane_cmd->add_option("--out", out, "CSV output")->required();

    auto* ema_cmd = app.add_subcommand("ema-ablation", "on-chip generation ablation");
    ema_cmd->add_option("--config", sim_config_file, "simulator config");
    ema_cmd->add_option("--n-encrypt", wl_enc, "encrypt count");
    ema_cmd->add_option("--out", out, "CSV output")->required();

    auto* fifo_cmd = app.add_subcommand("fifo-report", "per-stage FIFO occupancy");
    fifo_cmd->add_option("--config", sim_config_file, "simulator config");
    fifo_cmd->add_option("--out", out, "CSV output")->required();

    auto* selftest_cmd = app.add_subcommand("selftest", "oracle-equivalence suite");
    uint32_t selftest_logn = 10;
    selftest_cmd->add_option("--max-logn", selftest_logn, "largest transform exponent");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Manifest manifest;
    manifest.command_line = join_args(argc, argv);
    manifest.seed_hex = seed;

    if (prime_enum->parsed()) {
        const auto dots = bits_range.find("..");
        if (dots == std::string::npos) {
            std::cerr << "error: --bits expects LO..HI\n";
            return 2;
        }
        const uint32_t lo = (uint32_t)std::stoul(bits_range.substr(0, dots));
        const uint32_t hi = (uint32_t)std::stoul(bits_range.substr(dots + 2));
        cks_prime_list* list = nullptr;
        check(cks_primes_enumerate(lo, hi, prime_logn, &list), "primes enumerate");
        const size_t count = cks_prime_list_size(list);
        std::ostringstream body;
        for (size_t i = 0; i < count; ++i) {
            cks_prime_info info;
            check(cks_prime_list_get(list, i, &info), "prime read");
            body << info.q << " " << info.p_bw << " " << info.n;
            for (int t = 0; t < 3; ++t) {
                if (t < info.term_count)
                    body << " " << (info.sign[t] > 0 ? "+" : "-") << info.exp[t];
                else
                    body << " _";
            }
            body << "\n";
        }
        cks_prime_list_free(list);
        manifest.config_snapshot = "bits=" + bits_range + " logn=" + std::to_string(prime_logn);
        if (!prime_out.empty()) {
            std::ofstream f(prime_out, std::ios::trunc);
            f << "# manifest " << manifest.hash() << "\n" << body.str();
            f.close();
            manifest.add_artifact(prime_out);
            manifest.save(prime_out);
        } else {
            std::cout << body.str();
        }
        std::cout << "enumerated " << count << " primes in [2^" << lo << ", 2^" << hi << ")\n";
        return 0;
    }

    if (keygen_cmd->parsed() || encode_cmd->parsed() || encrypt_cmd->parsed() ||
        decrypt_cmd->parsed() || decode_cmd->parsed() || sweep_cmd->parsed()) {
        const cks_params params = load_params(params_file);
        manifest.config_snapshot = params_snapshot(params);
        cks_context* ctx = nullptr;
        check(cks_context_create(&params, &ctx), "context");

        if (keygen_cmd->parsed()) {
            cks_keys* keys = nullptr;
            check(cks_keygen(ctx, seed.c_str(), &keys), "keygen");
            check(cks_keys_save(keys, out.c_str()), "keys save");
            cks_keys_free(keys);
        } else if (encode_cmd->parsed()) {
            double *re = nullptr, *im = nullptr;
            size_t count = 0;
            check(cks_message_read(msg_file.c_str(), &re, &im, &count), "message read");
            cks_plaintext* pt = nullptr;
            check(cks_encode(ctx, re, im, count, mantissa_bits, &pt), "encode");
            check(cks_plaintext_save(pt, out.c_str()), "plaintext save");
            cks_plaintext_free(pt);
            cks_buffer_free(re);
            cks_buffer_free(im);
        } else if (encrypt_cmd->parsed()) {
            cks_keys* keys = nullptr;
            check(cks_keys_load(keys_file.c_str(), &keys), "keys load");
            cks_plaintext* pt = nullptr;
            check(cks_plaintext_load(in_file.c_str(), &pt), "plaintext load");
            cks_ciphertext* ct = nullptr;
            check(cks_encrypt(ctx, keys, pt, seed.c_str(), &ct), "encrypt");
            check(cks_ciphertext_save(ct, out.c_str()), "ciphertext save");
            cks_ciphertext_free(ct);
            cks_plaintext_free(pt);
            cks_keys_free(keys);
        } else if (decrypt_cmd->parsed()) {
            cks_keys* keys = nullptr;
            check(cks_keys_load(keys_file.c_str(), &keys), "keys load");
            cks_ciphertext* ct = nullptr;
            check(cks_ciphertext_load(in_file.c_str(), &ct), "ciphertext load");
            cks_plaintext* pt = nullptr;
            check(cks_decrypt(ctx, keys, ct, &pt), "decrypt");
            check(cks_plaintext_save(pt, out.c_str()), "plaintext save");
            cks_plaintext_free(pt);
            cks_ciphertext_free(ct);
            cks_keys_free(keys);
        } else if (decode_cmd->parsed()) {
            cks_plaintext* pt = nullptr;
            check(cks_plaintext_load(in_file.c_str(), &pt), "plaintext load");
            const size_t slots = cks_context_slot_count(ctx);
            std::vector<double> re(slots), im(slots);
            check(cks_decode(ctx, pt, mantissa_bits, re.data(), im.data(), slots), "decode");
            check(cks_message_write(out.c_str(), re.data(), im.data(), slots), "message write");
            cks_plaintext_free(pt);
        } else if (sweep_cmd->parsed()) {
            cks_sweep_row* rows = nullptr;
            size_t count = 0;
            check(cks_precision_sweep(ctx, sweep_lo, sweep_hi, sweep_step, sweep_trials,
                                      seed.c_str(), &rows, &count),
                  "sweep");
            std::vector<std::string> lines;
            for (size_t i = 0; i < count; ++i) {
                std::ostringstream os;
                os.precision(10);
                os << rows[i].mantissa_bits << "," << rows[i].precision_bits;
                lines.push_back(os.str());
            }
            cks_sweep_rows_free(rows);
            write_csv(out, manifest, "mantissa_bits,precision_bits", lines);
        }
        cks_context_free(ctx);
        if (!out.empty()) {
            manifest.add_artifact(out);
            manifest.save(out);
        }
        return 0;
    }

    if (account_cmd->parsed()) {
        const cks_params params = load_params(params_file);
        manifest.config_snapshot = params_snapshot(params) + "coeff_bits=" +
                                   std::to_string(coeff_bits) + "\n";
        cks_memory_report rep;
        check(cks_account_memory(&params, coeff_bits, acc_tw ? 1 : 0, acc_rand ? 1 : 0, &rep),
              "account-memory");
        std::ostringstream row;
        row << rep.public_key_bytes << "," << rep.masks_errors_bytes << "," << rep.twiddles_bytes
            << "," << rep.seed_bytes;
        if (out.empty()) {
            std::cout << "public_key_bytes,masks_errors_bytes,twiddles_bytes,seed_bytes\n"
                      << row.str() << "\n";
        } else {
            write_csv(out, manifest, "public_key_bytes,masks_errors_bytes,twiddles_bytes,seed_bytes",
                      {row.str()});
            manifest.add_artifact(out);
            manifest.save(out);
        }
        return 0;
    }

    if (explore_cmd->parsed()) {
        manifest.config_snapshot =
            "lanes=" + std::to_string(explore_lanes) + "\nlog_n=" + std::to_string(explore_logn);
        cks_explore_row* rows = nullptr;
        size_t count = 0;
        double red2 = 0, red4 = 0;
        check(cks_explore(explore_lanes, explore_logn, &rows, &count, &red2, &red4), "explore");
        std::vector<std::string> lines;
        for (size_t i = 0; i < count; ++i) {
            std::ostringstream os;
            os.precision(6);
            os << rows[i].plan << "," << rows[i].merged << "," << rows[i].modmul << ","
               << rows[i].fpmul << "," << rows[i].shared << "," << rows[i].twiddle_total << ","
               << rows[i].reduction_vs_radix2;
            lines.push_back(os.str());
        }
        cks_explore_rows_free(rows);
        write_csv(out, manifest, "plan,merged,modmul,fpmul,shared,twiddle_total,reduction_vs_radix2",
                  lines);
        manifest.add_artifact(out);
        manifest.save(out);
        std::cout << "best merged vs conventional radix-2: " << red2 * 100.0
                  << "% fewer multipliers; vs radix-2^2: " << red4 * 100.0 << "%\n";
        return 0;
    }

    if (simulate_cmd->parsed() || lane_cmd->parsed() || ema_cmd->parsed() || fifo_cmd->parsed()) {
        const cks_sim_config cfg = load_sim_config(sim_config_file);
        manifest.config_snapshot = sim_snapshot(cfg);
        cks_workload wl{wl_enc, wl_dec};
        if (!workload_file.empty())
            check(cks_workload_from_file(workload_file.c_str(), &wl), "workload");

        if (simulate_cmd->parsed()) {
            cks_sim_report rep;
            check(cks_simulate(&cfg, &wl, &rep), "simulate");
            json j;
            j["manifest"] = manifest.to_json();
            j["workload"] = {{"n_encrypt", wl.n_encrypt}, {"n_decrypt", wl.n_decrypt}};
            j["report"] = {{"total_cycles", rep.total_cycles},
                           {"wall_seconds", rep.wall_seconds},
                           {"ifft_cycles", rep.ifft_cycles},
                           {"ntt_cycles", rep.ntt_cycles},
                           {"mse_cycles", rep.mse_cycles},
                           {"intt_cycles", rep.intt_cycles},
                           {"fft_cycles", rep.fft_cycles},
                           {"dram_in_cycles", rep.dram_in_cycles},
                           {"dram_out_cycles", rep.dram_out_cycles},
                           {"ema_bytes_in", rep.ema_bytes_in},
                           {"ema_bytes_out", rep.ema_bytes_out},
                           {"stall_cycles_dram", rep.stall_cycles_dram},
                           {"stall_cycles_fifo", rep.stall_cycles_fifo},
                           {"throughput_ct_per_sec", rep.throughput_ct_per_sec}};
            std::ofstream outf(report_file, std::ios::trunc);
            outf << j.dump(2) << "\n";
            outf.close();
            manifest.add_artifact(report_file);
            manifest.save(report_file);
        } else if (lane_cmd->parsed()) {
            const auto lanes = parse_lane_list(lane_list);
            cks_lane_sweep_row* rows = nullptr;
            size_t count = 0;
            uint32_t knee = 0;
            check(cks_lane_sweep(&cfg, lanes.data(), lanes.size(), &rows, &count, &knee),
                  "lane-sweep");
            std::vector<std::string> lines;
            for (size_t i = 0; i < count; ++i) {
                std::ostringstream os;
                os.precision(10);
                os << rows[i].lanes << "," << rows[i].throughput_ct_per_sec << ","
                   << rows[i].stall_fraction << "," << rows[i].steady_cycles_per_ct;
                lines.push_back(os.str());
            }
            cks_lane_sweep_rows_free(rows);
            write_csv(out, manifest, "lanes,throughput_ct_per_sec,stall_fraction,cycles_per_ct",
                      lines);
            manifest.add_artifact(out);
            manifest.save(out);
            std::cout << "saturation knee at " << knee << " lanes\n";
        } else if (ema_cmd->parsed()) {
            cks_ema_row rows[3];
            double ratio = 0;
            check(cks_ema_ablation(&cfg, &wl, rows, &ratio), "ema-ablation");
            std::vector<std::string> lines;
            for (const auto& r : rows) {
                std::ostringstream os;
                os << r.variant << "," << r.latency_cycles << "," << r.ema_bytes;
                lines.push_back(os.str());
            }
            write_csv(out, manifest, "variant,latency_cycles,ema_bytes", lines);
            manifest.add_artifact(out);
            manifest.save(out);
            std::cout << "base over all latency ratio: " << ratio << "\n";
        } else {
            cks_fifo_row* rows = nullptr;
            size_t count = 0;
            int doubling = 0;
            check(cks_fifo_report(&cfg, &rows, &count, &doubling), "fifo-report");
            std::vector<std::string> lines;
            for (size_t i = 0; i < count; ++i) {
                std::ostringstream os;
                os << rows[i].stage << "," << rows[i].declared_words << ","
                   << rows[i].observed_words;
                lines.push_back(os.str());
            }
            cks_fifo_rows_free(rows);
            write_csv(out, manifest, "stage,declared_words,observed_words", lines);
            manifest.add_artifact(out);
            manifest.save(out);
            std::cout << "capacity doubling " << (doubling ? "holds" : "violated") << "\n";
        }
        return 0;
    }

    if (selftest_cmd->parsed()) {
        const cks_status status = cks_selftest(selftest_logn);
        if (status != CKS_OK) die(status, "selftest");
        std::cout << "selftest passed (transforms, arithmetic, streaming, roundtrip)\n";
        return 0;
    }

    std::cerr << app.help();
    return 2;
}
