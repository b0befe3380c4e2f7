#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "touchauth/dataset.hpp"
#include "touchauth/ga.hpp"
#include "touchauth/ingest.hpp"
#include "touchauth/text_io.hpp"

using namespace touchauth;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() /
               ("touchauth_cli_" + std::to_string(getpid()) + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "touchauth");
        out_.str("");
        err_.str("");
        return cli::run(args, out_, err_);
    }

    std::string read(const std::string& name) const { return text::read_file(path(name)); }
    void write(const std::string& name, const std::string& body) const {
        std::ofstream(path(name), std::ios::binary) << body;
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

// Non-comment, non-empty lines.
std::vector<std::string> data_lines(const std::string& body) {
    std::vector<std::string> lines;
    std::istringstream in(body);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> cells_of(const std::string& line) {
    std::vector<std::string> cells;
    for (auto f : text::split_fields(line)) cells.emplace_back(f);
    return cells;
}

const char* kFeatures =
    "a,b,c,user_id\n"
    "1,1,5,1\n2,2,3,1\n3,3,4,1\n4,4,1,1\n"
    "10,10,2,2\n11,11,6,2\n12,12,2,2\n13,13,5,2\n";

}  // namespace

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({}), cli::kUsage);
    EXPECT_EQ(run({"fly"}), cli::kUsage);
    EXPECT_EQ(run({"synth", "--users", "abc", "--out", path("x.csv")}), cli::kUsage);
    EXPECT_EQ(run({"synth", "--users", "1", "--out", path("x.csv")}), cli::kUsage);
    write("f.csv", kFeatures);
    EXPECT_EQ(run({"benchmark", path("f.csv"), "--out", path("r.json"), "--folds", "1"}), cli::kUsage);
    EXPECT_EQ(run({"synth", "--help"}), cli::kOk);
}

TEST_F(Cli, UnknownConfigKeyIsUsageError) {
    write("bad.cfg", "users=3\ncolour=blue\n");
    EXPECT_EQ(run({"synth", "--config", path("bad.cfg"), "--out", path("x.csv")}), cli::kUsage);
    EXPECT_NE(err_.str().find("colour"), std::string::npos);
}

TEST_F(Cli, InputErrorsNameTheFile) {
    EXPECT_EQ(run({"extract", path("missing.csv"), "--out", path("f.csv")}), cli::kInput);
    EXPECT_NE(err_.str().find("missing.csv"), std::string::npos);
    write("empty.csv", "");
    EXPECT_EQ(run({"extract", path("empty.csv"), "--out", path("f.csv")}), cli::kInput);
    EXPECT_NE(err_.str().find("empty.csv"), std::string::npos);
    write("empty_features.csv", "");
    EXPECT_EQ(run({"benchmark", path("empty_features.csv"), "--out", path("r.json")}), cli::kInput);
    EXPECT_NE(err_.str().find("empty_features.csv"), std::string::npos);
}

TEST_F(Cli, RuntimeErrorExitCode) {
    write("small.csv", "a,user_id\n1,1\n2,1\n3,1\n4,2\n5,2\n");
    EXPECT_EQ(run({"select", path("small.csv"), "--out", path("m.txt"), "--folds", "3"}), cli::kRuntime);
}

TEST_F(Cli, SynthCounts) {
    ASSERT_EQ(run({"synth", "--users", "2", "--strokes", "5", "--out", path("two.csv")}), cli::kOk) << err_.str();
    EXPECT_EQ(segment_strokes(parse_raw_events(read("two.csv"))).strokes.size(), 10u);

    ASSERT_EQ(run({"synth", "--users", "41", "--strokes", "3", "--out", path("many.csv")}), cli::kOk);
    std::set<std::int64_t> users;
    for (const auto& e : parse_raw_events(read("many.csv"))) users.insert(e.user_id);
    EXPECT_EQ(users.size(), 41u);
}

TEST_F(Cli, RerunsAreByteIdentical) {
    ASSERT_EQ(run({"synth", "--users", "3", "--strokes", "20", "--out", path("raw.csv")}), cli::kOk);
    const auto first = read("raw.csv");
    ASSERT_EQ(run({"synth", "--users", "3", "--strokes", "20", "--out", path("raw.csv")}), cli::kOk);
    EXPECT_EQ(read("raw.csv"), first);
    EXPECT_EQ(first.rfind("#@ command=synth\n", 0), 0u);

    ASSERT_EQ(run({"extract", path("raw.csv"), "--out", path("f.csv")}), cli::kOk) << err_.str();
    EXPECT_NE(out_.str().find("consumed"), std::string::npos);
    const auto features = read("f.csv");
    ASSERT_EQ(run({"extract", path("raw.csv"), "--out", path("f.csv")}), cli::kOk);
    EXPECT_EQ(read("f.csv"), features);
}

TEST_F(Cli, ConfigFromArtifactReproducesIt) {
    fs::create_directories(dir_ / "a");
    fs::create_directories(dir_ / "b");
    const auto cwd = fs::current_path();
    fs::current_path(dir_ / "a");
    const int first = run({"synth", "--users", "3", "--strokes", "7", "--seed", "016", "--out", "raw.csv"});
    fs::current_path(dir_ / "b");
    const int second = run({"synth", "--config", (dir_ / "a" / "raw.csv").string()});
    fs::current_path(cwd);
    ASSERT_EQ(first, cli::kOk);
    ASSERT_EQ(second, cli::kOk) << err_.str();
    EXPECT_EQ(text::read_file((dir_ / "b" / "raw.csv").string()), text::read_file((dir_ / "a" / "raw.csv").string()));
}

TEST_F(Cli, ConfigFromWrongCommandIsRejected) {
    ASSERT_EQ(run({"synth", "--users", "2", "--strokes", "2", "--out", path("raw.csv")}), cli::kOk);
    EXPECT_EQ(run({"extract", "--config", path("raw.csv")}), cli::kUsage);
}

TEST_F(Cli, SelectOneGenerationWritesOneTraceRow) {
    write("f.csv", kFeatures);
    ASSERT_EQ(run({"select", path("f.csv"), "--out", path("mask.txt"), "--generations", "1", "--folds", "2",
                   "--population", "4"}),
              cli::kOk)
        << err_.str();
    EXPECT_EQ(data_lines(read("mask.trace.csv")).size(), 2u);  // header + generation 0
    EXPECT_FALSE(read_mask_file(read("mask.txt")).empty());
}

TEST_F(Cli, CorrelateDuplicatedColumn) {
    write("f.csv", kFeatures);
    ASSERT_EQ(run({"correlate", path("f.csv"), "--out", path("corr.csv")}), cli::kOk) << err_.str();
    std::vector<std::vector<std::string>> cells;
    for (const auto& line : data_lines(read("corr.csv"))) cells.push_back(cells_of(line));
    ASSERT_EQ(cells.size(), 4u);
    EXPECT_EQ(cells[0], (std::vector<std::string>{"feature", "a", "b", "c"}));
    EXPECT_EQ(cells[1][2], "1");
    for (std::size_t i = 1; i < 4; ++i) {
        for (std::size_t j = 1; j < 4; ++j) EXPECT_EQ(cells[i][j], cells[j][i]);
    }
}

TEST_F(Cli, BenchmarkSeparableAndMaskedProtocols) {
    write("f.csv", kFeatures);
    const std::vector<std::string> schema = {"a", "b", "c"};
    Chromosome best;
    best.genes = {1, 0, 1};
    best.fitness = 1.0;
    write("mask.txt", write_mask_file(best, schema));

    ASSERT_EQ(run({"benchmark", path("f.csv"), "--out", path("plain.json"), "--classifiers", "knn,cart",
                   "--test-fraction", "0.25"}),
              cli::kOk)
        << err_.str();
    ASSERT_EQ(run({"benchmark", path("f.csv"), "--out", path("masked.json"), "--classifiers", "knn,cart",
                   "--test-fraction", "0.25", "--mask", path("mask.txt")}),
              cli::kOk)
        << err_.str();
    const auto table = read("plain.table.txt");
    EXPECT_NE(table.find("100.00"), std::string::npos) << table;
    EXPECT_NE(read("masked.table.txt").find("GA-extracted"), std::string::npos);
    EXPECT_NE(read("plain.series.csv").find("classifier,extracted"), std::string::npos);
    EXPECT_EQ(data_lines(read("plain.loss.csv")), (std::vector<std::string>{"classifier,split,epoch,loss"}));

    auto plain = nlohmann::ordered_json::parse(read("plain.json"));
    auto masked = nlohmann::ordered_json::parse(read("masked.json"));
    EXPECT_EQ(plain["config"]["command"], "benchmark");
    EXPECT_EQ(masked["protocol"]["mask"], nlohmann::ordered_json(std::vector<std::string>{"a", "c"}));
    plain["protocol"].erase("mask");
    masked["protocol"].erase("mask");
    EXPECT_EQ(plain["protocol"], masked["protocol"]);

    // the JSON report is itself a valid config source
    const auto before = read("plain.json");
    ASSERT_EQ(run({"benchmark", "--config", path("plain.json")}), cli::kOk) << err_.str();
    EXPECT_EQ(read("plain.json"), before);
}

TEST(ConfigText, ReadsPlainAndArtifactForms) {
    const auto plain = cli::parse_config_text("# note\nusers = 3\nseed=7\n");
    EXPECT_EQ(plain, (std::vector<std::pair<std::string, std::string>>{{"users", "3"}, {"seed", "7"}}));
    const auto artifact = cli::parse_config_text("#@ command=synth\n#@ users=2\nuser_id,x\n1,2\n");
    EXPECT_EQ(artifact, (std::vector<std::pair<std::string, std::string>>{{"command", "synth"}, {"users", "2"}}));
}
