#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "wigner/cli.hpp"
#include "wigner/errors.hpp"
#include "wigner/theory.hpp"
#include "wigner/version.hpp"

using namespace wigner;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path p;
    explicit TempDir(const std::string& name) : p(fs::temp_directory_path() / name) {
        fs::remove_all(p);
        fs::create_directories(p);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(p, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(bool(f));
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& bytes) {
    std::ofstream f(p, std::ios::binary);
    REQUIRE(bool(f));
    f << bytes;
}

struct RunOut {
    int code;
    std::string out, err;
};

RunOut run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

const char* kMcSmall =
    R"({"command":"mc","N":100,"M":120,"beta":1,"dist":"gaussian","seed":42,)"
    R"("payload":"bump","E0":0.0,"eta0":0.5,"threads":1,"lambdas":[0.0,1.0]})";

}  // namespace

TEST_CASE("fnv1a: standard test vectors") {
    CHECK(cli::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(cli::fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(cli::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("help text matches the golden file and lists every command") {
    const auto r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(r.out == slurp(fs::path(TEST_DATA_DIR) / "help_golden.txt"));
    for (const char* cmd :
         {"validate-profile", "theory", "mc", "locallaw", "sweep", "meso-limits"})
        CHECK(r.out.find(cmd) != std::string::npos);
}

TEST_CASE("usage errors exit 64") {
    CHECK(run_cli({}).code == 64);
    CHECK(run_cli({"bogus"}).code == 64);
    CHECK(run_cli({"mc"}).code == 64);              // --config is required
    CHECK(run_cli({"mc", "--frobnicate"}).code == 64);
}

TEST_CASE("parse_config: rejections") {
    using cli::parse_config;
    CHECK_THROWS_AS((void)parse_config("{]", "mc"), config_error);
    CHECK_THROWS_AS((void)parse_config("[1,2]", "mc"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"frob\":1}", "mc"), config_error);
    // key valid for one command but not another
    CHECK_THROWS_AS((void)parse_config("{\"M\":200}", "theory"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"command\":\"theory\"}", "mc"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"N\":1}", "mc"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"M\":50}", "mc"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"beta\":3}", "mc"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"eta0\":-1}", "mc"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"payload\":\"box\"}", "mc"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"profile\":\"banded\"}", "mc"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"profile\":{\"type\":\"cosine\",\"amplitude\":1.5}}",
                                       "mc"),
                    config_error);
    CHECK_THROWS_AS((void)parse_config("{\"side\":1}", "meso-limits"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"N_list\":[100,1]}", "sweep"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"beta\":2,\"two_point\":true}", "locallaw"),
                    config_error);
    CHECK_THROWS_AS((void)parse_config("{\"N\":\"many\"}", "mc"), config_error);
    CHECK_THROWS_AS((void)parse_config("{\"dist\":\"cauchy\"}", "mc"), config_error);
}

TEST_CASE("parse_config: fields, defaults, and the config hash") {
    const std::string text = kMcSmall;
    const auto rc = cli::parse_config(text, "mc");
    CHECK(rc.command == "mc");
    CHECK(rc.exp.N == 100);
    CHECK(rc.exp.M == 120);
    CHECK(rc.exp.ens.beta == 1);
    CHECK(rc.exp.ens.seed == 42);
    CHECK(rc.exp.threads == 1);
    CHECK(rc.exp.lambdas == std::vector<double>{0.0, 1.0});
    CHECK(rc.payload == "bump");
    CHECK(rc.eta0 == 0.5);
    CHECK(rc.exp.tf.eta0() == 0.5);
    CHECK(rc.exp.tf.E0() == 0.0);
    CHECK(rc.profile_type == "flat");    // default
    CHECK(rc.diag_dist == "gaussian");   // defaults to dist
    CHECK(rc.config_hash == cli::fnv1a_hex(text));

    const auto rc2 = cli::parse_config(
        R"({"profile":{"type":"cosine","amplitude":0.5},"dist":"rademacher"})", "mc");
    CHECK(rc2.profile_type == "cosine");
    CHECK(rc2.profile_amplitude == 0.5);
    CHECK(rc2.diag_dist == "rademacher");
    const auto S = cli::build_profile(rc2, 32);
    CHECK(S.n() == 32);
    CHECK(S.c_sup() > S.c_inf());
}

TEST_CASE("validate-profile: inline mode and cosine kernel") {
    const auto flat = run_cli({"validate-profile", "--n", "64", "--profile", "flat"});
    CHECK(flat.code == 0);
    const json j = json::parse(flat.out);
    CHECK(j["pass"] == true);
    CHECK(j["N"] == 64);
    CHECK(j["version"] == std::string(kVersion));
    CHECK(j["max_row_dev"].get<double>() == 0.0);

    const auto cosine = run_cli({"validate-profile", "--n", "40", "--profile", "cosine"});
    CHECK(cosine.code == 0);
    const json jc = json::parse(cosine.out);
    CHECK(jc["pass"] == true);
    CHECK(jc["max_row_dev"].get<double>() < 1e-10);
    CHECK(jc["c_sup"].get<double>() > jc["c_inf"].get<double>());
}

TEST_CASE("theory: beta=2 with k4=0 reports exactly zero bias") {
    TempDir td("wigner_cli_theory");
    spit(td.p / "cfg.json",
         R"({"command":"theory","N":200,"beta":2,"k4":0.0,"payload":"bump","eta0":0.5})");
    const auto r = run_cli({"theory", "--config", (td.p / "cfg.json").string()});
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["bias"].get<double>() == 0.0);
    CHECK(j["variance"].get<double>() > 0.0);
    CHECK(j["k4"].get<double>() == 0.0);
    CHECK(j["contour"]["order"] == 10);
}

TEST_CASE("theory: violated mesoscopic hypothesis exits 1 with a message") {
    TempDir td("wigner_cli_hypo");
    spit(td.p / "cfg.json",
         R"({"command":"theory","N":100,"payload":"bump","eta0":0.5,"tau":0.2})");
    const auto r = run_cli({"theory", "--config", (td.p / "cfg.json").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("tau must stay below c0/16") != std::string::npos);
}

TEST_CASE("io failures exit 74") {
    const auto r = run_cli({"mc", "--config", "/nonexistent/none.json"});
    CHECK(r.code == 74);
    CHECK(r.err.find("io error") != std::string::npos);
}

TEST_CASE("mc: artifacts, rerun determinism, and thread-count invariance") {
    TempDir td("wigner_cli_mc");
    spit(td.p / "cfg.json", kMcSmall);
    const auto a = run_cli({"mc", "--config", (td.p / "cfg.json").string(), "--out",
                            (td.p / "a").string()});
    REQUIRE(a.code == 0);
    for (const char* f : {"samples.csv", "summary.json", "histogram.dat", "qq.dat"})
        CHECK(fs::exists(td.p / "a" / f));

    const auto b = run_cli({"mc", "--config", (td.p / "cfg.json").string(), "--out",
                            (td.p / "b").string()});
    REQUIRE(b.code == 0);

    REQUIRE(setenv("WIGNER_CLT_THREADS", "3", 1) == 0);
    const auto c = run_cli({"mc", "--config", (td.p / "cfg.json").string(), "--out",
                            (td.p / "c").string()});
    REQUIRE(unsetenv("WIGNER_CLT_THREADS") == 0);
    REQUIRE(c.code == 0);

    for (const char* f : {"samples.csv", "summary.json", "histogram.dat", "qq.dat"}) {
        const auto ref = slurp(td.p / "a" / f);
        CHECK(ref == slurp(td.p / "b" / f));
        CHECK(ref == slurp(td.p / "c" / f));
    }

    // samples.csv: comment banner, header, then M rows index,value
    const auto csv = slurp(td.p / "a" / "samples.csv");
    CHECK(csv.rfind("# wigner-clt", 0) == 0);
    CHECK(csv.find("index,centered\n") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 1 + 120);
}

TEST_CASE("mc: stdout summary round-trips to the library result") {
    const std::string text = kMcSmall;
    TempDir td("wigner_cli_round");
    spit(td.p / "cfg.json", text);
    const auto res = run_cli({"mc", "--config", (td.p / "cfg.json").string()});
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);

    const auto rc = cli::parse_config(text, "mc");
    const auto S = cli::build_profile(rc, rc.exp.N);
    const auto direct = harness::run_experiment(rc.exp, S);

    CHECK(j["config_hash"] == cli::fnv1a_hex(text));
    CHECK(j["moments"]["mean"].get<double>() == direct.stats.mean);
    CHECK(j["moments"]["variance"].get<double>() == direct.stats.variance);
    CHECK(j["moments"]["excess_kurtosis"].get<double>() == direct.stats.excess_kurtosis);
    CHECK(j["theory"]["variance"].get<double>() == direct.prediction.variance);
    CHECK(j["theory"]["bias"].get<double>() == direct.prediction.bias);
    CHECK(j["ks"]["D"].get<double>() == direct.ks.D);
    CHECK(j["ks"]["p"].get<double>() == direct.ks.p);
    CHECK(j["samples"]["count"].get<long>() == direct.stats.count);
    REQUIRE(j["char_function"].size() == direct.char_table.size());
    for (std::size_t i = 0; i < direct.char_table.size(); ++i) {
        CHECK(j["char_function"][i]["re"].get<double>() ==
              direct.char_table[i].empirical.real());
        CHECK(j["char_function"][i]["theory"].get<double>() == direct.char_table[i].theory);
    }
}

TEST_CASE("gnuplot artifacts: two numeric columns, comments start with #") {
    TempDir td("wigner_cli_gnuplot");
    spit(td.p / "cfg.json", kMcSmall);
    const auto r = run_cli({"mc", "--config", (td.p / "cfg.json").string(), "--out",
                            (td.p / "o").string()});
    REQUIRE(r.code == 0);
    for (const char* f : {"histogram.dat", "qq.dat"}) {
        std::istringstream in(slurp(td.p / "o" / f));
        std::string line;
        long rows = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (line[0] == '#') continue;
            std::istringstream row(line);
            double x = 0, y = 0;
            std::string extra;
            CHECK(bool(row >> x >> y));
            CHECK(!(row >> extra));  // exactly two columns
            ++rows;
        }
        CHECK(rows > 10);
    }
}

TEST_CASE("locallaw: deterministic run, csv shape, exit reflects the band") {
    TempDir td("wigner_cli_locallaw");
    spit(td.p / "cfg.json",
         R"({"command":"locallaw","N":200,"beta":1,"seed":7,"samples":1,"two_point":true})");
    const auto r = run_cli({"locallaw", "--config", (td.p / "cfg.json").string(), "--out",
                            (td.p / "o").string()});
    REQUIRE((r.code == 0 || r.code == 2));
    const json j = json::parse(slurp(td.p / "o" / "locallaw.json"));
    CHECK((r.code == 0) == j["pass"].get<bool>());
    CHECK(j["t1_residual"].get<double>() < 1e-10);
    CHECK(j["t_theory_relation_residual"].get<double>() < 1e-10);
    CHECK(j["worst_ratios"].contains("entrywise"));
    CHECK(j["worst_ratios"].contains("isotropic"));
    CHECK(j["worst_ratios"].contains("T_entrywise"));

    const auto csv = slurp(td.p / "o" / "locallaw.csv");
    CHECK(csv.find("N,seed,z_re,z_im,zp_re,zp_im,check,ratio,band,pass\n") !=
          std::string::npos);
    // 15 probes x 4 one-point ratios + 3 two-point ratios
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 1 + 15 * 4 + 3);

    const auto again = run_cli({"locallaw", "--config", (td.p / "cfg.json").string(),
                                "--out", (td.p / "o2").string()});
    CHECK(again.code == r.code);
    CHECK(slurp(td.p / "o2" / "locallaw.csv") == csv);
}

TEST_CASE("sweep: csv table shape") {
    TempDir td("wigner_cli_sweep");
    spit(td.p / "cfg.json",
         R"({"command":"sweep","M":100,"seed":11,"payload":"bump","eta0":0.5,)"
         R"("N_list":[80,120]})");
    const auto r = run_cli({"sweep", "--config", (td.p / "cfg.json").string(), "--out",
                            (td.p / "o").string()});
    REQUIRE(r.code == 0);
    const auto csv = slurp(td.p / "o" / "sweep.csv");
    CHECK(csv.find("N,var_ratio,ks_p,mean,bias_theory\n") != std::string::npos);
    CHECK(csv.find("\n80,") != std::string::npos);
    CHECK(csv.find("\n120,") != std::string::npos);
    const json j = json::parse(slurp(td.p / "o" / "sweep.json"));
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0]["N"] == 80);
    CHECK(j["rows"][1]["N"] == 120);
    for (const auto& row : j["rows"]) {
        CHECK(row["var_ratio"].get<double>() > 0.3);
        CHECK(row["var_ratio"].get<double>() < 3.0);
    }
}

TEST_CASE("meso-limits: values match the theory module exactly") {
    TempDir td("wigner_cli_meso");
    spit(td.p / "cfg.json",
         R"({"command":"meso-limits","payload":"bump","beta":1,"side":-2})");
    const auto r = run_cli({"meso-limits", "--config", (td.p / "cfg.json").string()});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["bulk_variance"].get<double>() == theory::bulk_limit(spectral::bump(), 1));
    const auto e = theory::edge_limit(spectral::bump(), 1, -2);
    CHECK(j["edge_mean"].get<double>() == e.mean);
    CHECK(j["edge_variance"].get<double>() == e.variance);
}
