/*
 * ckkstream C API: client-side CKKS pipeline, prime tooling, design-space
 * exploration, and the streaming-architecture simulator behind opaque
 * handles and error codes. Every function returns CKS_OK on success;
 * cks_last_error() carries the detail message of the most recent failure
 * on the calling thread.
 */

#ifndef CKKSTREAM_H
#define CKKSTREAM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cks_status {
    CKS_OK = 0,
    CKS_ERR_INVALID = 1,  /* parameter or precondition violation */
    CKS_ERR_RANGE = 2,    /* domain/range failure (overflow, headroom) */
    CKS_ERR_IO = 3,       /* file problems */
    CKS_ERR_INTERNAL = 4  /* internal consistency failure */
} cks_status;

const char* cks_status_name(cks_status status);
const char* cks_last_error(void);
const char* cks_version(void);

/* ---- parameters ------------------------------------------------------- */

typedef struct cks_params {
    uint32_t log_n;
    uint32_t prime_bits;
    uint32_t levels;
    double scale;
    double sigma;
} cks_params;

void cks_params_default(cks_params* params);
cks_status cks_params_from_file(const char* path, cks_params* params);

/* ---- NTT-friendly primes ---------------------------------------------- */

typedef struct cks_prime_list cks_prime_list;

typedef struct cks_prime_info {
    uint64_t q;
    uint32_t p_bw;
    uint32_t n;
    uint32_t two_adicity;
    int32_t term_count;  /* number of k terms, at most 3 */
    int32_t exp[3];
    int32_t sign[3];
} cks_prime_info;

cks_status cks_primes_enumerate(uint32_t bit_lo, uint32_t bit_hi, uint32_t n,
                                cks_prime_list** out);
size_t cks_prime_list_size(const cks_prime_list* list);
cks_status cks_prime_list_get(const cks_prime_list* list, size_t index, cks_prime_info* out);
void cks_prime_list_free(cks_prime_list* list);

/* ---- client context and operations ------------------------------------ */

typedef struct cks_context cks_context;
typedef struct cks_keys cks_keys;
typedef struct cks_plaintext cks_plaintext;
typedef struct cks_ciphertext cks_ciphertext;

cks_status cks_context_create(const cks_params* params, cks_context** out);
void cks_context_free(cks_context* ctx);
uint32_t cks_context_slot_count(const cks_context* ctx);

/* seeds are 32 hex digits (128 bits) */
cks_status cks_keygen(const cks_context* ctx, const char* seed_hex, cks_keys** out);
void cks_keys_free(cks_keys* keys);
cks_status cks_keys_save(const cks_keys* keys, const char* path);
cks_status cks_keys_load(const char* path, cks_keys** out);

cks_status cks_encode(const cks_context* ctx, const double* re, const double* im,
                      size_t n_slots, uint32_t mantissa_bits, cks_plaintext** out);
cks_status cks_decode(const cks_context* ctx, const cks_plaintext* pt, uint32_t mantissa_bits,
                      double* re, double* im, size_t n_slots);
cks_status cks_encrypt(const cks_context* ctx, const cks_keys* keys, const cks_plaintext* pt,
                       const char* seed_hex, cks_ciphertext** out);
cks_status cks_decrypt(const cks_context* ctx, const cks_keys* keys, const cks_ciphertext* ct,
                       cks_plaintext** out);

uint32_t cks_plaintext_level(const cks_plaintext* pt);
void cks_plaintext_free(cks_plaintext* pt);
void cks_ciphertext_free(cks_ciphertext* ct);
cks_status cks_plaintext_save(const cks_plaintext* pt, const char* path);
cks_status cks_plaintext_load(const char* path, cks_plaintext** out);
cks_status cks_ciphertext_save(const cks_ciphertext* ct, const char* path);
cks_status cks_ciphertext_load(const char* path, cks_ciphertext** out);

/* message files: .csv re,im lines, anything else the binary container */
cks_status cks_message_read(const char* path, double** re, double** im, size_t* count);
cks_status cks_message_write(const char* path, const double* re, const double* im, size_t count);
void cks_buffer_free(double* buffer);

/* ---- precision sweep --------------------------------------------------- */

typedef struct cks_sweep_row {
    uint32_t mantissa_bits;
    double precision_bits;
} cks_sweep_row;

cks_status cks_precision_sweep(const cks_context* ctx, uint32_t m_lo, uint32_t m_hi,
                               uint32_t m_step, uint32_t trials, const char* seed_hex,
                               cks_sweep_row** rows, size_t* count);
void cks_sweep_rows_free(cks_sweep_row* rows);

/* ---- memory accountant -------------------------------------------------- */

typedef struct cks_memory_report {
    uint64_t public_key_bytes;
    uint64_t masks_errors_bytes;
    uint64_t twiddles_bytes;
    uint64_t seed_bytes;
} cks_memory_report;

cks_status cks_account_memory(const cks_params* params, uint32_t coeff_bits,
                              int onchip_twiddles, int onchip_randoms,
                              cks_memory_report* out);

/* ---- design explorer ---------------------------------------------------- */

typedef struct cks_explore_row {
    char plan[96]; /* stage radices, e.g. "16x16x16x16" */
    int merged;
    uint64_t modmul;
    uint64_t fpmul;
    uint64_t shared;
    uint64_t twiddle_total;
    double reduction_vs_radix2;
} cks_explore_row;

cks_status cks_explore(uint32_t lanes, uint32_t log_n, cks_explore_row** rows, size_t* count,
                       double* reduction_vs_radix2, double* reduction_vs_radix4);
void cks_explore_rows_free(cks_explore_row* rows);

cks_status cks_count_multipliers(uint32_t lanes, uint32_t log_n, const char* plan, int merged,
                                 uint64_t* modmul, uint64_t* fpmul, uint64_t* shared,
                                 uint64_t* twiddle_total);

cks_status cks_shared_budget(uint32_t lanes, uint32_t log_n, double* shared_area_um2,
                             double* disjoint_area_um2, double* baseline_area_um2,
                             double* saving_vs_disjoint, double* saving_vs_baseline);

/* ---- streaming simulator ------------------------------------------------ */

typedef enum cks_sim_mode {
    CKS_MODE_DUAL_ENCRYPT = 0,
    CKS_MODE_DUAL_DECRYPT = 1,
    CKS_MODE_MIXED = 2
} cks_sim_mode;

typedef struct cks_sim_config {
    double clock_hz;
    double dram_bytes_per_sec;
    uint32_t dram_burst_bytes;
    uint32_t lanes_per_pnl;
    uint32_t pnl_per_rsc;
    uint32_t rsc_count;
    uint64_t global_scratch_bytes;
    uint32_t word_bits_int;
    uint32_t word_bits_fp;
    uint32_t mult_latency;
    uint32_t mse_latency;
    cks_sim_mode mode;
    int onchip_twiddles;
    int onchip_randoms;
    int twiddle_fetch_per_pass;
    uint32_t twiddle_buffer_words;
    uint32_t decrypt_level;
    cks_params params;
} cks_sim_config;

void cks_sim_config_default(cks_sim_config* cfg);
cks_status cks_sim_config_from_file(const char* path, cks_sim_config* cfg);

typedef struct cks_workload {
    uint64_t n_encrypt;
    uint64_t n_decrypt;
} cks_workload;

cks_status cks_workload_from_file(const char* path, cks_workload* wl);

typedef struct cks_sim_report {
    uint64_t total_cycles;
    double wall_seconds;
    uint64_t ifft_cycles;
    uint64_t ntt_cycles;
    uint64_t mse_cycles;
    uint64_t intt_cycles;
    uint64_t fft_cycles;
    uint64_t dram_in_cycles;
    uint64_t dram_out_cycles;
    uint64_t ema_bytes_in;
    uint64_t ema_bytes_out;
    uint64_t stall_cycles_dram;
    uint64_t stall_cycles_fifo;
    double throughput_ct_per_sec;
} cks_sim_report;

cks_status cks_simulate(const cks_sim_config* cfg, const cks_workload* wl, cks_sim_report* out);

typedef struct cks_lane_sweep_row {
    uint32_t lanes;
    double throughput_ct_per_sec;
    double stall_fraction;
    uint64_t steady_cycles_per_ct;
} cks_lane_sweep_row;

cks_status cks_lane_sweep(const cks_sim_config* cfg, const uint32_t* lanes, size_t n_lanes,
                          cks_lane_sweep_row** rows, size_t* count, uint32_t* knee_lanes);
void cks_lane_sweep_rows_free(cks_lane_sweep_row* rows);

typedef struct cks_ema_row {
    char variant[8]; /* "base", "tf_gen", "all" */
    uint64_t latency_cycles;
    uint64_t ema_bytes;
} cks_ema_row;

cks_status cks_ema_ablation(const cks_sim_config* cfg, const cks_workload* wl,
                            cks_ema_row rows[3], double* base_over_all);

typedef struct cks_fifo_row {
    uint32_t stage;
    uint64_t declared_words;
    uint64_t observed_words;
} cks_fifo_row;

cks_status cks_fifo_report(const cks_sim_config* cfg, cks_fifo_row** rows, size_t* count,
                           int* doubling_holds);
void cks_fifo_rows_free(cks_fifo_row* rows);

/* ---- self test ----------------------------------------------------------
 * Runs the oracle-equivalence suite on transforms, modular arithmetic,
 * streaming schedules and the client roundtrip at sizes up to 2^max_log_n.
 */
cks_status cks_selftest(uint32_t max_log_n);

#ifdef __cplusplus
}
#endif

#endif /* CKKSTREAM_H */
