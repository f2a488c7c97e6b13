#include "chiralwg/output.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "chiralwg/errors.hpp"
#include "chiralwg/version.hpp"

namespace chiralwg {

namespace {

using json = nlohmann::ordered_json;

// Compact SHA-1 (FIPS 180-1), enough for content hashes in the manifest.
struct Sha1 {
  uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
  uint64_t total = 0;
  unsigned char block[64];
  std::size_t fill = 0;

  static uint32_t rol(uint32_t x, int s) { return (x << s) | (x >> (32 - s)); }

  void process(const unsigned char* p) {
    uint32_t w[80];
    for (int i = 0; i < 16; ++i)
      w[i] = (uint32_t(p[4 * i]) << 24) | (uint32_t(p[4 * i + 1]) << 16) |
             (uint32_t(p[4 * i + 2]) << 8) | uint32_t(p[4 * i + 3]);
    for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
    uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int i = 0; i < 80; ++i) {
      uint32_t f, k;
      if (i < 20) {
        f = (b & c) | (~b & d);
        k = 0x5A827999u;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      const uint32_t t = rol(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = rol(b, 30);
      b = a;
      a = t;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
  }

  void update(const unsigned char* data, std::size_t n) {
    total += n;
    while (n > 0) {
      const std::size_t take = std::min(n, sizeof(block) - fill);
      std::memcpy(block + fill, data, take);
      fill += take;
      data += take;
      n -= take;
      if (fill == 64) {
        process(block);
        fill = 0;
      }
    }
  }

  std::string finish() {
    const uint64_t bits = total * 8;
    const unsigned char one = 0x80;
    update(&one, 1);
    const unsigned char zero = 0x00;
    while (fill != 56) update(&zero, 1);
    unsigned char len[8];
    for (int i = 0; i < 8; ++i) len[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
    update(len, 8);
    char out[41];
    for (int i = 0; i < 5; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
    return std::string(out, 40);
  }
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json metric_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Emission:
      return "emission";
    case Protocol::Absorption:
      return "absorption";
    case Protocol::Transmission:
      return "transmission";
  }
  return "unknown";
}

}  // namespace

std::string sha1_hex(const unsigned char* data, std::size_t n) {
  Sha1 s;
  s.update(data, n);
  return s.finish();
}

std::string git_blob_sha1(const std::string& content) {
  Sha1 s;
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  s.update(reinterpret_cast<const unsigned char*>(header.data()), header.size());
  s.update(reinterpret_cast<const unsigned char*>(content.data()), content.size());
  return s.finish();
}

std::string timeseries_csv(const ProtocolReport& report) {
  std::string out = "t,n_R,n_L,beta_R_re,beta_R_im,beta_L_re,beta_L_im,pop_1,pop_2,trace_dev,min_eig\n";
  const FluxSeries& fs = report.flux;
  const bool has_qubits = fs.populations.count("q1") > 0;
  const auto& pop1 = has_qubits ? fs.populations.at("q1") : fs.populations.at("r1");
  const auto& pop2 = has_qubits ? fs.populations.at("q2") : fs.populations.at("r2");
  for (std::size_t i = 0; i < fs.times.size(); ++i) {
    out += fmt17(fs.times[i]);
    out += ',';
    out += fmt17(fs.n_r[i]);
    out += ',';
    out += fmt17(fs.n_l[i]);
    out += ',';
    out += fmt17(fs.beta_r[i].real());
    out += ',';
    out += fmt17(fs.beta_r[i].imag());
    out += ',';
    out += fmt17(fs.beta_l[i].real());
    out += ',';
    out += fmt17(fs.beta_l[i].imag());
    out += ',';
    out += fmt17(pop1[i]);
    out += ',';
    out += fmt17(pop2[i]);
    out += ',';
    out += fmt17(report.record_trace_dev[i]);
    out += ',';
    out += fmt17(report.record_min_eig[i]);
    out += '\n';
  }
  return out;
}

std::string metrics_json(const ProtocolReport& report) {
  json j;
  j["protocol"] = protocol_name(report.protocol);
  j["metrics"] = {
      {"P_R", metric_or_null(report.metrics.p_r)},
      {"P_L", metric_or_null(report.metrics.p_l)},
      {"directionality", metric_or_null(report.metrics.directionality)},
      {"pulse_fidelity", metric_or_null(report.metrics.pulse_fidelity)},
      {"state_fidelity", metric_or_null(report.metrics.state_fidelity)},
      {"transmittance", metric_or_null(report.metrics.transmittance)},
      {"reflectance", metric_or_null(report.metrics.reflectance)},
      {"group_delay_est", metric_or_null(report.metrics.group_delay_est)},
  };
  j["oracle_deviation"] = metric_or_null(report.oracle_deviation);
  j["health"] = {
      {"max_trace_dev", report.health.max_trace_dev},
      {"min_eig", report.health.min_eig},
      {"max_herm_residual", report.health.max_herm_residual},
      {"max_top_fock_leakage", report.health.max_top_fock_leakage},
      {"passed", report.health.passed},
  };
  return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& result) {
  std::string out;
  for (const auto& name : result.axis_names) out += name + ",";
  out += "P_R,P_L,directionality,pulse_fidelity,state_fidelity,transmittance,reflectance,"
         "group_delay_est,ok,error\n";
  for (const auto& p : result.points) {
    for (double c : p.coords) {
      out += fmt17(c);
      out += ',';
    }
    const double vals[] = {p.metrics.p_r,          p.metrics.p_l,
                           p.metrics.directionality, p.metrics.pulse_fidelity,
                           p.metrics.state_fidelity, p.metrics.transmittance,
                           p.metrics.reflectance,    p.metrics.group_delay_est};
    for (double v : vals) {
      out += std::isnan(v) ? "" : fmt17(v);
      out += ',';
    }
    out += p.ok ? "1" : "0";
    out += ',';
    out += p.error;
    out += '\n';
  }
  return out;
}

std::string sweep_metrics_json(const SweepResult& result) {
  json j;
  const char* name = result.kind == SweepKind::Eta
                         ? "eta"
                         : result.kind == SweepKind::DetuningDistance ? "detuning_distance"
                                                                      : "bandwidth";
  std::size_t failed = 0;
  for (const auto& p : result.points)
    if (!p.ok) ++failed;
  j["sweep"] = name;
  j["points"] = result.points.size();
  j["failed"] = failed;
  return j.dump(2) + "\n";
}

std::string manifest_json(const RunConfig& cfg,
                          const std::vector<std::pair<std::string, std::string>>& file_hashes) {
  json j;
  j["tool"] = "chiralwg";
  j["version"] = kVersion;
  j["units"] = {{"note", "all rates and times below are absolute; gamma_ph sets the time unit"},
                {"gamma_ph", cfg.model.gamma_ph}};
  j["config"] = json::parse(config_to_json(cfg));
  json files = json::object();
  for (const auto& [name, hash] : file_hashes) files[name] = hash;
  j["files"] = files;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw_io("failed writing '" + path + "'");
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw_io("cannot create output directory '" + path + "': " + ec.message());
}

}  // namespace chiralwg
