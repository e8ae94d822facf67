#include "wigner/cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wigner/errors.hpp"
#include "wigner/locallaw.hpp"
#include "wigner/semicircle.hpp"
#include "wigner/version.hpp"

namespace wigner::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using cplx = std::complex<double>;

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string num(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

std::string num6(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

std::string jesc(std::string_view s) {
    std::string r;
    for (char c : s) {
        if (c == '"')
            r += "\\\"";
        else if (c == '\\')
            r += "\\\\";
        else if (static_cast<unsigned char>(c) < 0x20) {
            char b[8];
            std::snprintf(b, sizeof b, "\\u%04x", c);
            r += b;
        } else {
            r += c;
        }
    }
    return r;
}

[[noreturn]] void bad(const std::string& msg) { throw config_error("config: " + msg); }

spectral::TestFunction make_payload(const std::string& name) {
    if (name == "bump") return spectral::bump();
    if (name == "tapered_gaussian") return spectral::tapered_gaussian();
    if (name == "cosine_window") return spectral::cosine_window();
    bad("unknown payload '" + name + "'");
}

// keys each command accepts; anything else is a config error
const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::set<std::string> ens = {"beta", "dist", "dist_p", "diag_dist", "diag_p"};
    static const std::set<std::string> tfk = {"payload", "E0", "eta0"};
    static const std::map<std::string, std::set<std::string>> m = [] {
        std::map<std::string, std::set<std::string>> a;
        const std::set<std::string> common = {"command", "N", "seed", "out", "profile"};
        auto with = [&](std::initializer_list<std::set<std::string>> parts,
                        std::initializer_list<std::string> extra) {
            std::set<std::string> s = common;
            for (const auto& p : parts) s.insert(p.begin(), p.end());
            s.insert(extra.begin(), extra.end());
            return s;
        };
        a["validate-profile"] = with({}, {});
        a["theory"] = with({ens, tfk}, {"tau", "k4"});
        a["mc"] = with({ens, tfk}, {"M", "tau", "threads", "lambdas", "bins"});
        a["locallaw"] = with({ens}, {"samples", "two_point"});
        a["sweep"] = with({ens, tfk}, {"M", "tau", "threads", "lambdas", "N_list"});
        a["meso-limits"] = with({ens, tfk}, {"side"});
        return a;
    }();
    return m;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw io_error("read failed: " + path);
    return ss.str();
}

void write_file(const fs::path& p, const std::string& bytes) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw io_error("cannot open for writing: " + p.string());
    f << bytes;
    f.flush();
    if (!f) throw io_error("write failed: " + p.string());
}

void banner(std::ostream& out, const Provenance& p, const char* what) {
    out << "# wigner-clt " << p.version << " " << what << "\n"
        << "# command=" << p.command << " config=" << p.config_hash << " seed=" << p.seed
        << "\n";
}

std::string prov_json_fields(const Provenance& p) {
    std::ostringstream os;
    os << "  \"tool\": \"wigner-clt\",\n  \"version\": \"" << p.version
       << "\",\n  \"config_hash\": \"" << p.config_hash << "\",\n  \"command\": \""
       << p.command << "\",\n  \"seed\": " << p.seed << ",\n";
    return os.str();
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::string& command) {
    const auto& keysets = allowed_keys();
    const auto ks = keysets.find(command);
    if (ks == keysets.end()) bad("unknown command '" + command + "'");

    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        bad(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) bad("top-level document must be a JSON object");
    for (const auto& item : j.items())
        if (!ks->second.count(item.key()))
            bad("key '" + item.key() + "' is not accepted by command '" + command + "'");

    RunConfig rc;
    rc.command = command;
    rc.config_hash = fnv1a_hex(json_text);
    double dist_p = 0.5, diag_p = 0.5;
    try {
        if (j.contains("command") && j["command"].get<std::string>() != command)
            bad("document declares command '" + j["command"].get<std::string>() +
                "', invoked as '" + command + "'");
        rc.exp.N = j.value("N", long(400));
        rc.exp.M = j.value("M", long(2000));
        rc.exp.ens.beta = j.value("beta", 1);
        rc.exp.ens.seed = j.value("seed", std::uint64_t(0));
        rc.exp.tau = j.value("tau", 0.0);
        rc.exp.threads = j.value("threads", 1);
        rc.exp.out_dir = j.value("out", std::string());
        rc.exp.lambdas = j.value("lambdas", std::vector<double>{0.5, 1.0, 2.0});
        rc.payload = j.value("payload", std::string("bump"));
        rc.E0 = j.value("E0", 0.0);
        rc.eta0 = j.value("eta0", 1.0);
        rc.dist = j.value("dist", std::string("gaussian"));
        dist_p = j.value("dist_p", 0.5);
        rc.diag_dist = j.value("diag_dist", rc.dist);
        diag_p = j.value("diag_p", dist_p);
        rc.k4_explicit = j.contains("k4");
        rc.k4 = j.value("k4", 0.0);
        rc.samples = j.value("samples", long(3));
        rc.two_point = j.value("two_point", false);
        rc.bins = j.value("bins", 40);
        rc.side = j.value("side", 2);
        rc.N_list = j.value("N_list", std::vector<long>{});
        if (j.contains("profile")) {
            const auto& pj = j["profile"];
            if (pj.is_string()) {
                rc.profile_type = pj.get<std::string>();
            } else if (pj.is_object()) {
                for (const auto& item : pj.items())
                    if (item.key() != "type" && item.key() != "amplitude")
                        bad("profile: unknown key '" + item.key() + "'");
                rc.profile_type = pj.value("type", std::string("flat"));
                rc.profile_amplitude = pj.value("amplitude", 0.8);
            } else {
                bad("profile must be a string or an object");
            }
        }
    } catch (const json::exception& e) {
        bad(e.what());
    }

    if (rc.exp.N < 2) bad("N must be at least 2");
    if ((command == "mc" || command == "sweep") && rc.exp.M < 100)
        bad("M must be at least 100");
    if (rc.exp.ens.beta != 1 && rc.exp.ens.beta != 2) bad("beta must be 1 or 2");
    if (!(rc.eta0 > 0)) bad("eta0 must be positive");
    if (rc.exp.tau < 0) bad("tau must be nonnegative");
    if (rc.exp.threads < 1) bad("threads must be at least 1");
    if (rc.bins < 1) bad("bins must be at least 1");
    if (rc.samples < 1) bad("samples must be at least 1");
    if (rc.side != 2 && rc.side != -2) bad("side must be +2 or -2");
    if (rc.profile_type != "flat" && rc.profile_type != "cosine")
        bad("profile type must be 'flat' or 'cosine'");
    if (!(std::abs(rc.profile_amplitude) < 1))
        bad("profile amplitude must satisfy |a| < 1");
    for (double lam : rc.exp.lambdas)
        if (!std::isfinite(lam)) bad("lambdas must be finite");
    for (long n : rc.N_list)
        if (n < 2) bad("N_list entries must be at least 2");
    if (rc.two_point && rc.exp.ens.beta != 1)
        bad("two_point checks need beta = 1 (real symmetric samples)");

    try {
        rc.exp.ens.dist = rng::parse_dist(rc.dist, dist_p);
        rc.exp.ens.diag_dist = rng::parse_dist(rc.diag_dist, diag_p);
    } catch (const std::exception& e) {
        bad(e.what());
    }
    rc.exp.tf = make_payload(rc.payload).scaled(rc.E0, rc.eta0);
    return rc;
}

prof::VarianceProfile build_profile(const RunConfig& rc, long N) {
    if (rc.profile_type == "flat") return prof::VarianceProfile::flat(int(N));
    const double a = rc.profile_amplitude;
    return prof::VarianceProfile::from_kernel(int(N), [a](double x, double y) {
        return 1.0 + a * std::cos(M_PI * (x - y));
    });
}

void write_samples_csv(std::ostream& out, const harness::ExperimentResult& r,
                       const Provenance& p) {
    banner(out, p, "per-sample centered statistics");
    out << "index,centered\n";
    for (std::size_t i = 0; i < r.centered.size(); ++i)
        out << r.indices[i] << "," << num(r.centered[i]) << "\n";
}

void write_summary_json(std::ostream& out, const RunConfig& rc,
                        const harness::ExperimentResult& r, const Provenance& p) {
    const auto& s = r.stats;
    out << "{\n" << prov_json_fields(p);
    out << "  \"N\": " << rc.exp.N << ",\n  \"M\": " << rc.exp.M << ",\n";
    out << "  \"beta\": " << rc.exp.ens.beta << ",\n";
    out << "  \"dist\": \"" << jesc(rc.dist) << "\",\n";
    out << "  \"diag_dist\": \"" << jesc(rc.diag_dist) << "\",\n";
    out << "  \"payload\": \"" << jesc(rc.payload) << "\",\n";
    out << "  \"E0\": " << num(rc.E0) << ",\n  \"eta0\": " << num(rc.eta0) << ",\n";
    out << "  \"profile\": \"" << jesc(rc.profile_type) << "\",\n";
    out << "  \"theory\": {\"variance\": " << num(r.prediction.variance)
        << ", \"bias\": " << num(r.prediction.bias) << ", \"k4\": "
        << num(r.prediction.k4_used) << ", \"tau\": " << num(r.prediction.tau)
        << ", \"quadrature_error_estimate\": "
        << num(r.prediction.quadrature_error_estimate) << "},\n";
    out << "  \"samples\": {\"count\": " << s.count << ", \"failures\": " << r.failures
        << "},\n";
    out << "  \"moments\": {\"mean\": " << num(s.mean) << ", \"se_mean\": " << num(s.se_mean)
        << ", \"variance\": " << num(s.variance) << ", \"se_variance\": "
        << num(s.se_variance) << ", \"skewness\": " << num(s.skewness)
        << ", \"se_skewness\": " << num(s.se_skewness) << ", \"excess_kurtosis\": "
        << num(s.excess_kurtosis) << ", \"se_kurtosis\": " << num(s.se_kurtosis) << "},\n";
    out << "  \"variance_ratio\": " << num(s.variance / r.prediction.variance) << ",\n";
    out << "  \"ks\": {\"D\": " << num(r.ks.D) << ", \"p\": " << num(r.ks.p) << "},\n";
    out << "  \"char_function\": [";
    for (std::size_t i = 0; i < r.char_table.size(); ++i) {
        const auto& row = r.char_table[i];
        out << (i ? ", " : "") << "{\"lambda\": " << num(row.lambda) << ", \"re\": "
            << num(row.empirical.real()) << ", \"im\": " << num(row.empirical.imag())
            << ", \"se\": " << num(row.se) << ", \"theory\": " << num(row.theory) << "}";
    }
    out << "],\n";
    out << "  \"warning\": \"" << jesc(r.warning) << "\"\n}\n";
}

void write_histogram(std::ostream& out, const std::vector<double>& samples, int bins,
                     const Provenance& p) {
    if (samples.empty()) throw argument_error("histogram: no samples");
    if (bins < 1) throw argument_error("histogram: bins must be at least 1");
    banner(out, p, "histogram");
    out << "# columns: bin_center density\n";
    const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
    const double mn = *mn_it;
    const double width = (*mx_it - mn) > 0 ? (*mx_it - mn) : 1.0;
    const double bw = width / bins;
    std::vector<long> count(std::size_t(bins), 0);
    for (double v : samples) {
        int k = int((v - mn) / bw);
        k = std::clamp(k, 0, bins - 1);
        ++count[std::size_t(k)];
    }
    for (int k = 0; k < bins; ++k)
        out << num(mn + (k + 0.5) * bw) << " "
            << num(double(count[std::size_t(k)]) / (double(samples.size()) * bw)) << "\n";
}

void write_qq(std::ostream& out, const std::vector<double>& samples, double Vf,
              const Provenance& p) {
    if (samples.size() < 2) throw argument_error("qq: need at least 2 samples");
    if (!(Vf > 0)) throw argument_error("qq: variance must be positive");
    banner(out, p, "normal Q-Q");
    out << "# columns: normal_quantile standardized_sample\n";
    double mean = 0;
    for (double v : samples) mean += v;
    mean /= double(samples.size());
    const double sd = std::sqrt(Vf);
    std::vector<double> z(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) z[i] = (samples[i] - mean) / sd;
    std::sort(z.begin(), z.end());
    const double n = double(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        out << num(rng::ppnd16((double(i) + 0.5) / n)) << " " << num(z[i]) << "\n";
}

namespace {

// writes bytes to out_dir/name, or streams the json artifact when out_dir is
// empty; returns whether a file was written
bool emit(const RunConfig& rc, const std::string& name, const std::string& bytes,
          bool is_summary, std::ostream& out) {
    if (rc.exp.out_dir.empty()) {
        if (is_summary) out << bytes;
        return false;
    }
    const fs::path dir(rc.exp.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory: " + dir.string());
    write_file(dir / name, bytes);
    out << "wrote " << (dir / name).string() << "\n";
    return true;
}

int cmd_validate_profile(const RunConfig& rc, std::ostream& out) {
    const auto S = build_profile(rc, rc.exp.N);
    const auto rep = prof::validate(S);
    const Provenance p{kVersion, rc.config_hash, rc.command, rc.exp.ens.seed};
    std::ostringstream js;
    js << "{\n" << prov_json_fields(p);
    js << "  \"N\": " << rc.exp.N << ",\n  \"profile\": \"" << jesc(rc.profile_type)
       << "\",\n";
    js << "  \"max_row_dev\": " << num(rep.max_row_dev) << ",\n";
    js << "  \"asymmetry\": " << num(rep.asymmetry) << ",\n";
    js << "  \"min_entry\": " << num(rep.min_entry) << ",\n";
    js << "  \"c_inf\": " << num(rep.c_inf) << ",\n  \"c_sup\": " << num(rep.c_sup)
       << ",\n";
    js << "  \"rows_ok\": " << (rep.rows_ok ? "true" : "false") << ",\n";
    js << "  \"symmetric_ok\": " << (rep.symmetric_ok ? "true" : "false") << ",\n";
    js << "  \"flat_ok\": " << (rep.flat_ok ? "true" : "false") << ",\n";
    js << "  \"pass\": " << (rep.pass() ? "true" : "false") << "\n}\n";
    if (emit(rc, "profile.json", js.str(), true, out))
        out << "validate-profile: " << (rep.pass() ? "pass" : "FAIL")
            << " (c_inf=" << num6(rep.c_inf) << ", c_sup=" << num6(rep.c_sup)
            << ", max_row_dev=" << num6(rep.max_row_dev) << ")\n";
    return rep.pass() ? kExitOk : kExitValidation;
}

int cmd_theory(const RunConfig& rc, std::ostream& out) {
    const auto S = build_profile(rc, rc.exp.N);
    const auto contour = theory::ContourSpec::for_config(rc.exp.tf, rc.exp.N, rc.exp.tau);
    const double k4 =
        rc.k4_explicit ? rc.k4 : ensemble::fourth_cumulant_sum(rc.exp.ens, S);
    const auto pred = theory::predict(rc.exp.tf, S, rc.exp.ens.beta, k4, contour);
    const Provenance p{kVersion, rc.config_hash, rc.command, rc.exp.ens.seed};
    std::ostringstream js;
    js << "{\n" << prov_json_fields(p);
    js << "  \"N\": " << rc.exp.N << ",\n  \"beta\": " << rc.exp.ens.beta << ",\n";
    js << "  \"payload\": \"" << jesc(rc.payload) << "\",\n";
    js << "  \"E0\": " << num(rc.E0) << ",\n  \"eta0\": " << num(rc.eta0) << ",\n";
    js << "  \"profile\": \"" << jesc(rc.profile_type) << "\",\n";
    js << "  \"contour\": {\"tau\": " << num(contour.tau) << ", \"h1\": " << num(contour.h1)
       << ", \"h2\": " << num(contour.h2) << ", \"order\": " << contour.order
       << ", \"kappa0\": " << num(contour.kappa0) << ", \"c0\": " << num(contour.c0)
       << "},\n";
    js << "  \"k4\": " << num(pred.k4_used) << ",\n";
    js << "  \"variance\": " << num(pred.variance) << ",\n";
    js << "  \"bias\": " << num(pred.bias) << ",\n";
    js << "  \"quadrature_error_estimate\": " << num(pred.quadrature_error_estimate)
       << "\n}\n";
    if (emit(rc, "theory.json", js.str(), true, out))
        out << "theory: V(f) = " << num(pred.variance) << ", B(f) = " << num(pred.bias)
            << ", k4 = " << num6(pred.k4_used) << "\n";
    return kExitOk;
}

int cmd_mc(const RunConfig& rc, std::ostream& out) {
    const auto S = build_profile(rc, rc.exp.N);
    const auto r = harness::run_experiment(rc.exp, S);
    const Provenance p{kVersion, rc.config_hash, rc.command, rc.exp.ens.seed};

    std::ostringstream csv, js, hist, qq;
    write_samples_csv(csv, r, p);
    write_summary_json(js, rc, r, p);
    write_histogram(hist, r.centered, rc.bins, p);
    write_qq(qq, r.centered, r.prediction.variance, p);

    emit(rc, "samples.csv", csv.str(), false, out);
    emit(rc, "histogram.dat", hist.str(), false, out);
    emit(rc, "qq.dat", qq.str(), false, out);
    if (emit(rc, "summary.json", js.str(), true, out)) {
        out << "mc: variance_ratio=" << num6(r.stats.variance / r.prediction.variance)
            << " ks_p=" << num6(r.ks.p) << " mean=" << num6(r.stats.mean)
            << " bias_theory=" << num6(r.prediction.bias) << " failures=" << r.failures
            << "\n";
        if (!r.warning.empty()) out << "warning: " << r.warning << "\n";
    }
    return kExitOk;
}

int cmd_locallaw(const RunConfig& rc, std::ostream& out) {
    const long N = rc.exp.N;
    const auto S = build_profile(rc, N);
    const auto vecs = locallaw::default_test_vectors(int(N), rc.exp.ens.seed);
    const auto zs = locallaw::probe_grid(N);
    const double band = locallaw::default_band(N);
    const Provenance p{kVersion, rc.config_hash, rc.command, rc.exp.ens.seed};

    std::vector<double> rhos;
    rhos.reserve(zs.size());
    for (cplx z : zs) rhos.push_back(prof::rho(S, z));

    std::ostringstream head;
    banner(head, p, "local-law ratios");
    std::string csv = head.str() + locallaw::csv_header();
    std::map<std::string, double> worst;
    bool all_pass = true;
    double trace_identity_ratio = 0;
    for (long rep = 0; rep < rc.samples; ++rep) {
        std::optional<spectral::ResolventFactory> F;
        if (rc.exp.ens.beta == 1)
            F.emplace(ensemble::sample_real(rc.exp.ens, S, std::uint64_t(rep)));
        else
            F.emplace(ensemble::sample_complex(rc.exp.ens, S, std::uint64_t(rep)));
        for (std::size_t k = 0; k < zs.size(); ++k) {
            const auto lr = locallaw::check_resolvent_laws(*F, S, zs[k], vecs, band, rhos[k]);
            locallaw::append_csv(csv, N, rc.exp.ens.seed, lr);
            for (const auto& [name, val] : lr.ratios)
                worst[name] = std::max(worst[name], val);
            all_pass = all_pass && lr.pass();
        }
        if (rc.two_point) {
            const cplx z{0.2, 0.1};
            const auto tr = locallaw::check_T_laws(*F, S, z, std::conj(z), band);
            locallaw::append_csv(csv, N, rc.exp.ens.seed, tr);
            for (const auto& [name, val] : tr.ratios)
                worst[name] = std::max(worst[name], val);
            all_pass = all_pass && tr.pass();
            const auto ti = locallaw::check_trace_identities(*F, z, std::conj(z));
            trace_identity_ratio = std::max(trace_identity_ratio, ti.ratio);
        }
    }

    double t1 = 0, t_limit_residual = 0;
    if (rc.two_point) {
        const cplx z{0.2, 0.1};
        t1 = locallaw::t1_residual(S, z, std::conj(z));
        const auto Tth = prof::t_theory_matrix(S, z, std::conj(z));
        const cplx m1 = sc::stieltjes(z), m2 = sc::stieltjes(std::conj(z));
        Eigen::MatrixXcd R = Tth - m1 * m2 * (S.s() * Tth);
        R.noalias() -= (m1 * m1 * m2 * m2) * (S.s() * S.s()).eval().cast<cplx>();
        t_limit_residual = R.cwiseAbs().maxCoeff();
    }

    std::ostringstream js;
    js << "{\n" << prov_json_fields(p);
    js << "  \"N\": " << N << ",\n  \"beta\": " << rc.exp.ens.beta << ",\n";
    js << "  \"profile\": \"" << jesc(rc.profile_type) << "\",\n";
    js << "  \"samples\": " << rc.samples << ",\n";
    js << "  \"probes\": " << zs.size() << ",\n";
    js << "  \"band\": " << num(band) << ",\n";
    js << "  \"worst_ratios\": {";
    bool first = true;
    for (const auto& [name, val] : worst) {
        js << (first ? "" : ", ") << "\"" << name << "\": " << num(val);
        first = false;
    }
    js << "},\n";
    if (rc.two_point) {
        js << "  \"trace_identity_ratio\": " << num(trace_identity_ratio) << ",\n";
        js << "  \"t1_residual\": " << num(t1) << ",\n";
        js << "  \"t_theory_relation_residual\": " << num(t_limit_residual) << ",\n";
    }
    js << "  \"pass\": " << (all_pass ? "true" : "false") << "\n}\n";

    emit(rc, "locallaw.csv", csv, false, out);
    if (emit(rc, "locallaw.json", js.str(), true, out)) {
        out << "locallaw: band=" << num6(band);
        for (const auto& [name, val] : worst) out << " " << name << "=" << num6(val);
        out << " pass=" << (all_pass ? "true" : "false") << "\n";
    }
    return all_pass ? kExitOk : kExitNumeric;
}

int cmd_sweep(const RunConfig& rc, std::ostream& out) {
    const auto rows = harness::convergence_sweep(
        rc.exp, rc.N_list, [&rc](long n) { return build_profile(rc, n); });
    const Provenance p{kVersion, rc.config_hash, rc.command, rc.exp.ens.seed};
    std::ostringstream csv, js;
    banner(csv, p, "convergence sweep");
    csv << "N,var_ratio,ks_p,mean,bias_theory\n";
    js << "{\n" << prov_json_fields(p);
    js << "  \"rows\": [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        csv << r.N << "," << num(r.var_ratio) << "," << num(r.ks_p) << "," << num(r.mean)
            << "," << num(r.bias_theory) << "\n";
        js << (i ? ", " : "") << "{\"N\": " << r.N << ", \"var_ratio\": " << num(r.var_ratio)
           << ", \"ks_p\": " << num(r.ks_p) << ", \"mean\": " << num(r.mean)
           << ", \"bias_theory\": " << num(r.bias_theory) << "}";
    }
    js << "]\n}\n";
    emit(rc, "sweep.csv", csv.str(), false, out);
    if (emit(rc, "sweep.json", js.str(), true, out))
        for (const auto& r : rows)
            out << "sweep: N=" << r.N << " variance_ratio=" << num6(r.var_ratio)
                << " ks_p=" << num6(r.ks_p) << "\n";
    return kExitOk;
}

int cmd_meso(const RunConfig& rc, std::ostream& out) {
    const auto g = make_payload(rc.payload);
    const double bulk = theory::bulk_limit(g, rc.exp.ens.beta);
    const auto edge = theory::edge_limit(g, rc.exp.ens.beta, rc.side);
    const Provenance p{kVersion, rc.config_hash, rc.command, rc.exp.ens.seed};
    std::ostringstream js;
    js << "{\n" << prov_json_fields(p);
    js << "  \"payload\": \"" << jesc(rc.payload) << "\",\n";
    js << "  \"beta\": " << rc.exp.ens.beta << ",\n  \"side\": " << rc.side << ",\n";
    js << "  \"bulk_variance\": " << num(bulk) << ",\n";
    js << "  \"edge_mean\": " << num(edge.mean) << ",\n";
    js << "  \"edge_variance\": " << num(edge.variance) << "\n}\n";
    if (emit(rc, "meso.json", js.str(), true, out))
        out << "meso-limits: bulk_variance=" << num(bulk) << " edge_mean=" << num(edge.mean)
            << " edge_variance=" << num(edge.variance) << "\n";
    return kExitOk;
}

int dispatch(const RunConfig& rc, std::ostream& out) {
    if (rc.command == "validate-profile") return cmd_validate_profile(rc, out);
    if (rc.command == "theory") return cmd_theory(rc, out);
    if (rc.command == "mc") return cmd_mc(rc, out);
    if (rc.command == "locallaw") return cmd_locallaw(rc, out);
    if (rc.command == "sweep") return cmd_sweep(rc, out);
    if (rc.command == "meso-limits") return cmd_meso(rc, out);
    throw config_error("unknown command: " + rc.command);
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"CLT experiments for linear eigenvalue statistics of generalized "
                 "Wigner matrices",
                 "wigner-clt"};
    app.require_subcommand(1);

    std::string config_path, out_dir, inline_profile = "flat";
    std::uint64_t seed = 0;
    long inline_n = 0;

    const std::vector<std::pair<const char*, const char*>> commands = {
        {"validate-profile", "check a variance profile (doubly stochastic, symmetric, flat)"},
        {"theory", "evaluate the CLT variance V(f) and bias B(f)"},
        {"mc", "Monte Carlo CLT experiment against V(f) and B(f)"},
        {"locallaw", "resolvent local-law ratio checks on sampled matrices"},
        {"sweep", "rerun the mc experiment across a list of sizes N"},
        {"meso-limits", "universal mesoscopic bulk/edge limits of a payload"},
    };
    for (const auto& [name, desc] : commands) {
        auto* sub = app.add_subcommand(name, desc);
        auto* copt = sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--out", out_dir, "artifact directory (default: config 'out')");
        if (std::string(name) == "validate-profile") {
            // inline mode replaces the config for the smoke-test command
            sub->add_option("--n", inline_n, "profile size (inline mode, no config)");
            sub->add_option("--profile", inline_profile,
                            "profile type for inline mode: flat | cosine");
        } else {
            copt->required();
        }
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    try {
        std::string text;
        if (!config_path.empty()) {
            text = read_file(config_path);
        } else if (command == "validate-profile" && inline_n > 0) {
            text = "{\"command\":\"validate-profile\",\"N\":" + std::to_string(inline_n) +
                   ",\"profile\":\"" + inline_profile + "\"}";
        } else {
            throw config_error(command + ": --config is required");
        }
        RunConfig rc = parse_config(text, command);
        if (sub->count("--seed")) rc.exp.ens.seed = seed;
        if (!out_dir.empty()) rc.exp.out_dir = out_dir;
        if (const char* env = std::getenv("WIGNER_CLT_THREADS")) {
            char* end = nullptr;
            const long t = std::strtol(env, &end, 10);
            if (end == env || *end != '\0' || t < 1 || t > 4096)
                throw config_error("WIGNER_CLT_THREADS must be a positive integer");
            rc.exp.threads = int(t);
        }
        return dispatch(rc, out);
    } catch (const io_error& e) {
        err << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const numeric_error& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace wigner::cli
