#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chiralwg/config.hpp"
#include "chiralwg/protocols.hpp"
#include "chiralwg/sweeps.hpp"

namespace chiralwg {

std::string sha1_hex(const unsigned char* data, std::size_t n);
/// Git-style content hash: sha1("blob <size>\0" + content).
std::string git_blob_sha1(const std::string& content);

/// Fixed columns, floats with 17 significant digits, LF line endings:
/// t,n_R,n_L,beta_R_re,beta_R_im,beta_L_re,beta_L_im,pop_1,pop_2,trace_dev,min_eig
std::string timeseries_csv(const ProtocolReport& report);

std::string metrics_json(const ProtocolReport& report);
std::string sweep_csv(const SweepResult& result);
std::string sweep_metrics_json(const SweepResult& result);
std::string manifest_json(const RunConfig& cfg,
                          const std::vector<std::pair<std::string, std::string>>& file_hashes);

void write_text_file(const std::string& path, const std::string& content);  // throws Error(Io)
void ensure_directory(const std::string& path);

}  // namespace chiralwg
