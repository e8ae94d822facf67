#include "wigner/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "wigner/errors.hpp"

namespace wigner::harness {

MomentSummary moments(const std::vector<double>& x) {
    const long M = static_cast<long>(x.size());
    if (M < 2) throw argument_error("moments: need at least 2 samples");
    MomentSummary s;
    s.count = M;
    double mean = 0;
    for (double v : x) mean += v;
    mean /= double(M);
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= double(M);
    m3 /= double(M);
    m4 /= double(M);
    s.mean = mean;
    s.variance = m2 * double(M) / double(M - 1);
    if (m2 > 0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    s.se_mean = std::sqrt(s.variance / double(M));
    s.se_variance = s.variance * std::sqrt(2.0 / double(M - 1));
    s.se_skewness = std::sqrt(6.0 / double(M));
    s.se_kurtosis = std::sqrt(24.0 / double(M));
    return s;
}

static double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> samples) {
    if (samples.empty()) throw argument_error("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = double(samples.size());
    double D = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = normal_cdf(samples[i]);
        D = std::max(D, double(i + 1) / n - F);
        D = std::max(D, F - double(i) / n);
    }
    return D;
}

double kolmogorov_Q(double t) {
    if (t <= 0) return 1.0;
    double sum = 0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * double(k) * double(k) * t * t);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_normality(const std::vector<double>& samples) {
    if (samples.size() < 5) throw argument_error("ks_normality: need at least 5 samples");
    KsResult r;
    r.D = ks_statistic(samples);
    const double rM = std::sqrt(double(samples.size()));
    r.p = kolmogorov_Q((rM + 0.12 + 0.11 / rM) * r.D);
    return r;
}

std::vector<CharRow> char_function_check(const std::vector<double>& samples, double Vf,
                                         const std::vector<double>& lambdas) {
    if (samples.empty()) throw argument_error("char_function_check: empty sample");
    const double M = double(samples.size());
    std::vector<CharRow> rows;
    rows.reserve(lambdas.size());
    for (double lam : lambdas) {
        double sc = 0, ss = 0, sc2 = 0, ss2 = 0;
        for (double v : samples) {
            const double c = std::cos(lam * v), s = std::sin(lam * v);
            sc += c;
            ss += s;
            sc2 += c * c;
            ss2 += s * s;
        }
        CharRow row;
        row.lambda = lam;
        const double mc = sc / M, ms = ss / M;
        row.empirical = {mc, ms};
        const double var_c = std::max(0.0, sc2 / M - mc * mc);
        const double var_s = std::max(0.0, ss2 / M - ms * ms);
        row.se = std::sqrt((var_c + var_s) / M);
        row.theory = std::exp(-0.5 * lam * lam * Vf);
        rows.push_back(row);
    }
    return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const prof::VarianceProfile& S) {
    if (cfg.M < 100) throw argument_error("run_experiment: M must be at least 100");
    if (S.n() != cfg.N) throw argument_error("run_experiment: profile size does not match N");

    // for_config enforces the mesoscopic hypothesis eta0 sqrt(kappa0 + eta0)
    // >= N^{-1+c0} with c0 >= 16 tau
    const auto contour = theory::ContourSpec::for_config(cfg.tf, cfg.N, cfg.tau);
    const double k4 = ensemble::fourth_cumulant_sum(cfg.ens, S);

    ExperimentResult res;
    res.prediction = theory::predict(cfg.tf, S, cfg.ens.beta, k4, contour);
    if (!(res.prediction.variance > 0))
        throw argument_error("run_experiment: configuration rejected, V(f) <= 0");
    if (res.prediction.variance < 1e-3)
        res.warning = "V(f) < 1e-3: statistic nearly deterministic, CLT bands ill-conditioned";

    // keyed samples: slot i depends only on (config, i), so any thread may
    // compute it and the fixed-order reduction below is parallelism-invariant
    const long M = cfg.M;
    std::vector<double> vals(std::size_t(M), 0.0);
    std::vector<char> ok(std::size_t(M), 0);
    std::atomic<long> next{0};
    auto worker = [&]() {
        for (long i; (i = next.fetch_add(1)) < M;) {
            try {
                const auto sample = spectral::make_sample(cfg.ens, S, i);
                vals[std::size_t(i)] = spectral::centered_statistic(sample, cfg.tf).centered;
                ok[std::size_t(i)] = 1;
            } catch (const std::exception&) {
                ok[std::size_t(i)] = 0;
            }
        }
    };
    const int T = std::max(1, cfg.threads);
    if (T == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(T));
        for (int t = 0; t < T; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    res.centered.reserve(std::size_t(M));
    res.indices.reserve(std::size_t(M));
    for (long i = 0; i < M; ++i) {
        if (ok[std::size_t(i)]) {
            res.centered.push_back(vals[std::size_t(i)]);
            res.indices.push_back(i);
        } else {
            ++res.failures;
        }
    }
    if (res.failures * 100 > M)
        throw numeric_error("run_experiment: more than 1% of samples failed");

    res.stats = moments(res.centered);

    const double sd = std::sqrt(res.prediction.variance);
    std::vector<double> standardized(res.centered.size());
    for (std::size_t i = 0; i < res.centered.size(); ++i)
        standardized[i] = (res.centered[i] - res.stats.mean) / sd;
    res.ks = ks_normality(standardized);

    std::vector<double> demeaned(res.centered.size());
    for (std::size_t i = 0; i < res.centered.size(); ++i)
        demeaned[i] = res.centered[i] - res.stats.mean;
    res.char_table = char_function_check(demeaned, res.prediction.variance, cfg.lambdas);
    return res;
}

std::vector<SweepRow> convergence_sweep(
    ExperimentConfig base, const std::vector<long>& Ns,
    const std::function<prof::VarianceProfile(long)>& make_profile) {
    std::vector<SweepRow> rows;
    rows.reserve(Ns.size());
    for (long N : Ns) {
        base.N = N;
        const auto S = make_profile(N);
        const auto r = run_experiment(base, S);
        rows.push_back({N, r.stats.variance / r.prediction.variance, r.ks.p, r.stats.mean,
                        r.prediction.bias});
    }
    return rows;
}

}  // namespace wigner::harness
