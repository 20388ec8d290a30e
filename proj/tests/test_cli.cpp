#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "tcam/results.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = tcam::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) { return tcam::read_text_file(path.string()); }

void spit(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("tcam_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SimulateIsDeterministic) {
    ASSERT_EQ(cli({"--seed", "1", "simulate", "--p", "10", "--n", "500", "--out", path("a")}).code, 0);
    ASSERT_EQ(cli({"--seed", "1", "simulate", "--p", "10", "--n", "500", "--out", path("b")}).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_EQ(slurp(path("a.truth.json")), slurp(path("b.truth.json")));
}

TEST_F(CliTest, SimulateWithoutEdgesOrTiers) {
    ASSERT_EQ(cli({"simulate", "--p", "4", "--edge-prob", "0", "--tiers", "1", "--out", path("s")}).code, 0);
    const auto truth = json::parse(slurp(path("s.truth.json")));
    EXPECT_TRUE(truth["edges"].empty());
    EXPECT_FALSE(truth.contains("tiers"));
    EXPECT_FALSE(fs::exists(path("s.prior.json")));
}

TEST_F(CliTest, SimulateRejectsBadParameters) {
    EXPECT_EQ(cli({"simulate", "--edge-prob", "1.5", "--out", path("x")}).code, 2);
    EXPECT_EQ(cli({"simulate", "--p", "3", "--tiers", "5", "--out", path("x")}).code, 2);
    EXPECT_EQ(cli({"simulate", "--n", "1", "--out", path("x")}).code, 2);
}

TEST_F(CliTest, DiscoverRecoversTieredChain) {
    ASSERT_EQ(cli({"--seed", "2", "simulate", "--p", "6", "--tiers", "2", "--n", "800", "--out", path("s")}).code, 0);
    const auto run = cli({"--seed", "7", "discover", path("s.csv"), "--prior", path("s.prior.json"), "--out",
                          path("r.json"), "--dot", path("r.dot")});
    ASSERT_EQ(run.code, 0) << run.err;
    const auto doc = json::parse(slurp(path("r.json")));
    EXPECT_TRUE(tcam::validate_results(doc).empty());
    EXPECT_EQ(doc["mode"], "tcam");
    EXPECT_NE(slurp(path("r.dot")).find("digraph"), std::string::npos);
    const auto eval = cli({"evaluate", "--estimated", path("r.json"), "--truth", path("s.truth.json"), "--json"});
    ASSERT_EQ(eval.code, 0) << eval.err;
    EXPECT_LE(json::parse(eval.out)["summary"]["mean_shd"].get<double>(), 3.0);
}

TEST_F(CliTest, ForbidAllGivesEmptyGraph) {
    ASSERT_EQ(cli({"simulate", "--p", "3", "--n", "200", "--out", path("s")}).code, 0);
    spit(path("prior.json"),
         R"({"forbidden": [["X1","X2"],["X1","X3"],["X2","X1"],["X2","X3"],["X3","X1"],["X3","X2"]]})");
    const auto run = cli({"discover", path("s.csv"), "--prior", path("prior.json")});
    ASSERT_EQ(run.code, 0) << run.err;
    EXPECT_TRUE(json::parse(run.out)["edges"].empty());
}

TEST_F(CliTest, ConstantColumnIsDroppedAndRecorded) {
    std::ostringstream csv;
    csv << "a,b,k\n";
    for (int i = 0; i < 60; ++i) csv << i * 0.1 << "," << std::sin(i * 0.1) + 0.01 * (i % 7) << ",3\n";
    spit(path("d.csv"), csv.str());
    const auto run = cli({"discover", path("d.csv")});
    ASSERT_EQ(run.code, 0) << run.err;
    const auto doc = json::parse(run.out);
    EXPECT_EQ(doc["columns"], json::array({"a", "b"}));
    EXPECT_EQ(doc["provenance"]["dropped"][0]["name"], "k");
    EXPECT_EQ(doc["provenance"]["dropped"][0]["reason"], "constant");
}

TEST_F(CliTest, ExitCodesForBadInput) {
    EXPECT_EQ(cli({"discover", path("missing.csv")}).code, 2);
    spit(path("bad.csv"), "a,b\n1,oops\n");
    EXPECT_EQ(cli({"discover", path("bad.csv")}).code, 2);
    spit(path("ok.csv"), "a,b\n1,2\n2,1\n3,5\n");
    spit(path("prior.json"), R"({"roots": ["zzz"]})");
    EXPECT_EQ(cli({"discover", path("ok.csv"), "--prior", path("prior.json")}).code, 2);
    EXPECT_EQ(cli({"--mode", "fast", "discover", path("ok.csv")}).code, 2);
    EXPECT_EQ(cli({"--threads", "0", "discover", path("ok.csv")}).code, 2);
    EXPECT_EQ(cli({"--prune-alpha", "0", "discover", path("ok.csv")}).code, 2);
    EXPECT_EQ(cli({"--prune-alpha", "1", "discover", path("ok.csv")}).code, 2);
    EXPECT_EQ(cli({"--prune-alpha", "x", "discover", path("ok.csv")}).code, 2);
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, NumericalFailureExitsWithThree) {
    // Every training fold without the first row sees a constant target.
    std::ostringstream csv;
    csv << "spike,x\n";
    for (int i = 0; i < 40; ++i) csv << (i == 0 ? 1 : 0) << "," << std::cos(1.7 * i) << "\n";
    spit(path("d.csv"), csv.str());
    const auto run = cli({"discover", path("d.csv")});
    EXPECT_EQ(run.code, 3) << run.err;
}

TEST_F(CliTest, EvaluateAgainstTruth) {
    spit(path("truth.json"), R"({"columns": ["a","b","c"], "edges": [["a","b"],["b","c"]]})");
    auto results = [](const std::string& edges) {
        return R"({"version":"1.0","columns":["a","b","c"],"edges":)" + edges +
               R"(,"ordering":["a","b","c"],"scores":{"initial":3,"final":1},"provenance":{},"timings":null})";
    };
    spit(path("same.json"), results(R"([{"source":"a","target":"b","gain":0.5,"p_value":0.0},
                                        {"source":"b","target":"c","gain":0.4,"p_value":0.0}])"));
    spit(path("empty.json"), results("[]"));

    auto run = cli({"evaluate", "--estimated", path("same.json"), "--truth", path("truth.json"), "--json"});
    ASSERT_EQ(run.code, 0) << run.err;
    auto r = json::parse(run.out)["runs"][0];
    EXPECT_EQ(r["shd"], 0);
    EXPECT_EQ(r["precision"], 1.0);
    EXPECT_EQ(r["recall"], 1.0);

    run = cli({"evaluate", "--estimated", path("empty.json"), "--truth", path("truth.json"), "--json"});
    r = json::parse(run.out)["runs"][0];
    EXPECT_EQ(r["shd"], 2);
    EXPECT_EQ(r["recall"], 0.0);

    run = cli({"evaluate", "--estimated", path("same.json"), "--estimated", path("empty.json"), "--truth",
               path("truth.json"), "--json"});
    const auto summary = json::parse(run.out)["summary"];
    EXPECT_DOUBLE_EQ(summary["mean_shd"].get<double>(), 1.0);
    EXPECT_NEAR(summary["sd_shd"].get<double>(), std::sqrt(2.0), 1e-12);
    EXPECT_DOUBLE_EQ(summary["mean_edges"].get<double>(), 1.0);

    spit(path("other.json"), R"({"columns": ["a","b","q"], "edges": []})");
    EXPECT_EQ(cli({"evaluate", "--estimated", path("same.json"), "--truth", path("other.json")}).code, 2);
}

TEST_F(CliTest, EvaluateAgainstExpert) {
    spit(path("expert.json"), R"({"sure": [["a","b"]], "possible": [["b","c"]]})");
    spit(path("est.json"),
         R"({"version":"1.0","columns":["a","b","c"],"edges":[{"source":"b","target":"c","gain":null,"p_value":0.0},
             {"source":"c","target":"a","gain":null,"p_value":0.0}],"ordering":["b","c","a"],
             "scores":{"initial":3,"final":2},"provenance":{},"timings":null})");
    const auto run = cli({"evaluate", "--estimated", path("est.json"), "--expert", path("expert.json"), "--json"});
    ASSERT_EQ(run.code, 0) << run.err;
    EXPECT_EQ(json::parse(run.out)["runs"][0]["ashd"], 2);
    spit(path("bad_expert.json"), R"({"sure": [["a","zz"]]})");
    EXPECT_EQ(cli({"evaluate", "--estimated", path("est.json"), "--expert", path("bad_expert.json")}).code, 2);
}

TEST_F(CliTest, ExportDot) {
    spit(path("bad.json"), R"({"version": "1.0"})");
    EXPECT_EQ(cli({"export-dot", path("bad.json")}).code, 2);
    ASSERT_EQ(cli({"--seed", "3", "simulate", "--p", "5", "--tiers", "2", "--n", "300", "--out", path("s")}).code, 0);
    ASSERT_EQ(cli({"discover", path("s.csv"), "--prior", path("s.prior.json"), "--out", path("r.json")}).code, 0);
    const auto run = cli({"export-dot", path("r.json")});
    ASSERT_EQ(run.code, 0);
    EXPECT_EQ(run.out, tcam::to_dot(tcam::parse_results(slurp(path("r.json")))));
}

TEST_F(CliTest, DiscoverOutputIndependentOfThreads) {
    ASSERT_EQ(cli({"--seed", "4", "simulate", "--p", "8", "--tiers", "2", "--n", "300", "--out", path("s")}).code, 0);
    const auto one = cli({"--seed", "7", "--threads", "1", "discover", path("s.csv"), "--prior", path("s.prior.json")});
    const auto four = cli({"--seed", "7", "--threads", "4", "discover", path("s.csv"), "--prior", path("s.prior.json")});
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(one.out, four.out);
}

TEST_F(CliTest, BenchmarkReportsBothMethods) {
    const auto run = cli({"--seed", "1", "benchmark", "--p", "6", "--tiers", "2", "--n", "200", "--runs", "2", "--json"});
    ASSERT_EQ(run.code, 0) << run.err;
    const auto doc = json::parse(run.out);
    ASSERT_EQ(doc.size(), 2u);
    EXPECT_EQ(doc[0]["method"], "CAM");
    EXPECT_EQ(doc[1]["method"], "TCAM");
    EXPECT_LE(doc[1]["mean_iterations"].get<double>(), doc[0]["mean_iterations"].get<double>());
}

TEST_F(CliTest, MergeWritesWideTable) {
    spit(path("mother.csv"), "id,w\nm1,1\nm2,2\n");
    spit(path("child.csv"), "id,t\nc1,0.5\nc2,0.6\nc3,0.7\n");
    spit(path("bom.csv"), "child_id,mother_id,position\nc1,m1,1\nc2,m2,1\n");
    const auto run = cli({"merge", "--mother", path("mother.csv"), "--child", path("child.csv"), "--bom", path("bom.csv")});
    ASSERT_EQ(run.code, 0);
    EXPECT_EQ(run.out.substr(0, run.out.find('\n')), "id,w,1.t");
    EXPECT_NE(run.err.find("c3"), std::string::npos);
    spit(path("dup.csv"), "child_id,mother_id,position\nc1,m1,1\nc2,m1,1\n");
    EXPECT_EQ(cli({"merge", "--mother", path("mother.csv"), "--child", path("child.csv"), "--bom", path("dup.csv")}).code,
              2);
}
