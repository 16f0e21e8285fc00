// key=value config files for CLI and C API consumers.

#pragma once

#include <map>
#include <string>

#include "ckkstream/ckks.hpp"
#include "ckkstream/streamsim.hpp"

namespace cks {

using KvMap = std::map<std::string, std::string>;

KvMap read_kv_file(const std::string& path);

CkksParams ckks_params_from_kv(const KvMap& kv);
SimConfig sim_config_from_kv(const KvMap& kv);
WorkloadSpec workload_from_kv(const KvMap& kv);

std::string ckks_params_to_kv(const CkksParams& params);
std::string sim_config_to_kv(const SimConfig& cfg);

}  // namespace cks
