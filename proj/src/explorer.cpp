#include "ckkstream/explorer.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cks {

namespace {

void validate_plan(const PipelineConfig& cfg) {
    if (cfg.lanes != 2 && cfg.lanes != 4 && cfg.lanes != 8 && cfg.lanes != 16)
        throw std::invalid_argument("lanes must be one of {2,4,8,16}");
    if (cfg.log_n < 1 || cfg.log_n > 20) throw std::invalid_argument("log_n out of range");
    uint32_t total = 0;
    for (uint32_t r : cfg.radix_plan) {
        if (r == 0) throw std::invalid_argument("zero stage radix");
        total += r;
    }
    if (total != cfg.log_n)
        throw std::invalid_argument("radix plan product does not equal N");
}

uint32_t aux_bank_count(const std::vector<uint32_t>& plan) {
    // pre-twist, post-twist, 1/N scaling; the pre-twist folds into the first
    // stage's composite input column when that stage spans >= 2 levels
    return plan.front() >= 2 ? 2 : 3;
}

uint64_t conventional_tmt(uint32_t log_n) {
    // pre-twist bank of N (unit lane included) + non-unit plain twiddles
    const uint64_t n = 1ull << log_n;
    return n + (n / 2) * log_n - (n - 1);
}

}  // namespace

bool merge_admissible(const std::vector<uint32_t>& radix_plan) {
    if (radix_plan.empty()) return false;
    for (uint32_t r : radix_plan)
        if (r != radix_plan.front()) return false;
    return true;
}

MultiplierBudget count_multipliers(const PipelineConfig& cfg) {
    validate_plan(cfg);
    const uint64_t levels = cfg.log_n;
    const uint64_t n = 1ull << cfg.log_n;
    const uint64_t butterfly_positions = (uint64_t)(cfg.lanes / 2) * levels;
    const uint64_t complex_positions = std::max<uint64_t>(cfg.lanes / 8, 1) * levels;
    const uint32_t complex_lanes = std::max<uint32_t>(cfg.lanes / 4, 1);

    if (cfg.merged && !merge_admissible(cfg.radix_plan))
        throw std::invalid_argument("merge not supported for this radix plan");

    MultiplierBudget b;
    // single-stage plans always fold (the lone stage spans the whole
    // transform); multi-stage radix-2 plans cannot host the composite fold
    const bool fold = cfg.merged && merge_admissible(cfg.radix_plan) &&
                      (cfg.radix_plan.size() == 1 ||
                       *std::min_element(cfg.radix_plan.begin(), cfg.radix_plan.end()) >= 2);
    b.merged_effective = fold;
    if (fold) {
        b.modmul_count = butterfly_positions;
        b.fpmul_count = complex_positions;
        b.twiddle_mult_total = (n / 2) * levels;
    } else {
        const uint32_t aux = aux_bank_count(cfg.radix_plan);
        b.modmul_count = butterfly_positions + (uint64_t)aux * (cfg.lanes + 1);
        b.fpmul_count = complex_positions + (uint64_t)aux * (complex_lanes + 1);
        b.twiddle_mult_total = conventional_tmt(cfg.log_n);
    }
    b.shared_unit_count = std::max<uint64_t>(b.modmul_count, 4 * b.fpmul_count);
    return b;
}

ExploreResult explore_configs(uint32_t lanes, uint32_t log_n) {
    if ((lanes & (lanes - 1)) != 0 || lanes < 2)
        throw std::invalid_argument("lanes must be a power of two");
    // enumerate compositions of log_n into parts <= 4
    std::vector<std::vector<uint32_t>> plans;
    std::vector<uint32_t> cur;
    const uint32_t max_part = 4;
    auto recurse = [&](auto&& self, uint32_t remaining) -> void {
        if (remaining == 0) {
            plans.push_back(cur);
            return;
        }
        for (uint32_t part = 1; part <= std::min(max_part, remaining); ++part) {
            cur.push_back(part);
            self(self, remaining - part);
            cur.pop_back();
        }
    };
    recurse(recurse, log_n);

    ExploreResult result;
    for (const auto& plan : plans) {
        for (bool merged : {true, false}) {
            if (merged && !merge_admissible(plan)) continue;
            PipelineConfig cfg{lanes, log_n, plan, merged, EngineMode::Ntt};
            ExploreRow row;
            row.radix_plan = plan;
            row.merged = merged;
            row.budget = count_multipliers(cfg);
            result.rows.push_back(std::move(row));
        }
    }
    std::sort(result.rows.begin(), result.rows.end(), [](const ExploreRow& a, const ExploreRow& b) {
        if (a.budget.modmul_count != b.budget.modmul_count)
            return a.budget.modmul_count < b.budget.modmul_count;
        return a.radix_plan < b.radix_plan;
    });

    uint64_t best_merged = UINT64_MAX;
    for (const auto& row : result.rows)
        if (row.budget.merged_effective)
            best_merged = std::min(best_merged, row.budget.modmul_count);
    if (best_merged == UINT64_MAX) best_merged = 0;
    result.best_merged_modmul = best_merged;

    const std::vector<uint32_t> radix2_plan(log_n, 1);
    PipelineConfig r2{lanes, log_n, radix2_plan, false, EngineMode::Ntt};
    result.radix2_conventional_modmul = count_multipliers(r2).modmul_count;
    if (log_n % 2 == 0) {
        const std::vector<uint32_t> radix4_plan(log_n / 2, 2);
        PipelineConfig r4{lanes, log_n, radix4_plan, false, EngineMode::Ntt};
        result.radix4_conventional_modmul = count_multipliers(r4).modmul_count;
    }
    if (result.radix2_conventional_modmul)
        result.reduction_vs_radix2 =
            1.0 - (double)best_merged / (double)result.radix2_conventional_modmul;
    if (result.radix4_conventional_modmul)
        result.reduction_vs_radix4 =
            1.0 - (double)best_merged / (double)result.radix4_conventional_modmul;

    for (auto& row : result.rows)
        row.reduction_vs_radix2 =
            1.0 - (double)row.budget.modmul_count / (double)result.radix2_conventional_modmul;
    return result;
}

std::string plan_to_string(const std::vector<uint32_t>& radix_plan) {
    std::ostringstream os;
    for (size_t i = 0; i < radix_plan.size(); ++i) {
        if (i) os << "x";
        os << (1u << radix_plan[i]);
    }
    return os.str();
}

std::vector<uint32_t> plan_from_string(const std::string& text, uint32_t log_n) {
    std::vector<uint32_t> plan;
    if (text == "radix2" || text == "radix-2") {
        plan.assign(log_n, 1);
        return plan;
    }
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, 'x')) {
        const unsigned long radix = std::stoul(part);
        uint32_t lg = 0;
        while ((1ull << lg) < radix) ++lg;
        if ((1ull << lg) != radix || lg == 0)
            throw std::invalid_argument("stage radices must be powers of two >= 2");
        plan.push_back(lg);
    }
    return plan;
}

SharedBudgetReport shared_budget(const MultiplierBudget& ntt, const MultiplierBudget& fft,
                                 uint32_t lanes, uint32_t log_n, const AreaModel& areas) {
    SharedBudgetReport rep;
    rep.combined = ntt;
    rep.combined.fpmul_count = fft.fpmul_count;
    rep.combined.shared_unit_count =
        std::max<uint64_t>(ntt.modmul_count, 4 * fft.fpmul_count);
    rep.disjoint_units = ntt.modmul_count + 4 * fft.fpmul_count;
    rep.shared_area_um2 = (double)rep.combined.shared_unit_count * areas.ntt_friendly_montgomery;
    rep.disjoint_area_um2 = (double)rep.disjoint_units * areas.ntt_friendly_montgomery;
    rep.saving_vs_disjoint = 1.0 - rep.shared_area_um2 / rep.disjoint_area_um2;

    // conventional radix-2 disjoint NTT + FFT hardware built from vanilla
    // Montgomery multipliers; a multiplier-count proxy, not the full engine
    const std::vector<uint32_t> radix2_plan(log_n, 1);
    PipelineConfig r2{lanes, log_n, radix2_plan, false, EngineMode::Ntt};
    const MultiplierBudget base = count_multipliers(r2);
    const uint64_t baseline_units = base.modmul_count + 4 * base.fpmul_count;
    rep.baseline_area_um2 = (double)baseline_units * areas.vanilla_montgomery;
    rep.saving_vs_baseline = 1.0 - rep.shared_area_um2 / rep.baseline_area_um2;
    return rep;
}

}  // namespace cks
