#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wigner/harness.hpp"

namespace wigner::cli {

// exit codes: 0 success, 1 validation failure, 2 numeric failure,
// 64 usage error (unknown command / bad flags), 74 I/O failure
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;

// FNV-1a 64-bit hash of the raw config bytes, as 16 hex digits
std::string fnv1a_hex(std::string_view bytes);

// a parsed single-command JSON config document
struct RunConfig {
    std::string command;
    harness::ExperimentConfig exp;  // N, M, ensemble, scaled tf, tau, threads, ...
    std::string profile_type = "flat";  // flat | cosine
    double profile_amplitude = 0.8;     // cosine kernel 1 + a cos(pi (x - y))
    std::string payload = "bump";       // bump | tapered_gaussian | cosine_window
    double E0 = 0.0, eta0 = 1.0;
    std::string dist = "gaussian", diag_dist = "gaussian";
    double k4 = 0.0;
    bool k4_explicit = false;  // theory: override the ensemble-derived k4
    long samples = 3;          // locallaw sample count
    bool two_point = false;    // locallaw: also run the T(z, z') checks
    int bins = 40;             // histogram bins
    int side = 2;              // meso-limits edge side, +2 or -2
    std::vector<long> N_list;  // sweep sizes
    std::string config_hash;
};

RunConfig parse_config(const std::string& json_text, const std::string& command);

prof::VarianceProfile build_profile(const RunConfig& rc, long N);

struct Provenance {
    std::string version, config_hash, command;
    std::uint64_t seed = 0;
};

// artifact emitters; bytes depend only on the arguments
void write_samples_csv(std::ostream& out, const harness::ExperimentResult& r,
                       const Provenance& p);
void write_summary_json(std::ostream& out, const RunConfig& rc,
                        const harness::ExperimentResult& r, const Provenance& p);
void write_histogram(std::ostream& out, const std::vector<double>& samples, int bins,
                     const Provenance& p);
void write_qq(std::ostream& out, const std::vector<double>& samples, double Vf,
              const Provenance& p);

// the whole CLI, callable in-process:
//   run({"mc", "--config", "cfg.json", "--out", "runs/x"}, std::cout, std::cerr)
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace wigner::cli
