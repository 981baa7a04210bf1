#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SUBSEG_FIXTURE_DIR;

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("subseg_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    CliResult run(const std::string& args) const {
        const auto out = dir_ / "stdout.txt";
        const auto err = dir_ / "stderr.txt";
        const std::string cmd =
            std::string(SUBSEG_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(out), read_file(err)};
    }

    std::string fixture(const std::string& rel) const { return (kFixtures / rel).string(); }

    fs::path dir_;
};

TEST_F(CliTest, HelpExitsZero) {
    EXPECT_EQ(run("--help").exit_code, 0);
    for (const char* sub : {"synth", "build-corpus", "train", "segment", "eval-intrinsic", "eval-bleu", "eval-clir"}) {
        const auto r = run(std::string(sub) + " --help");
        EXPECT_EQ(r.exit_code, 0) << sub;
        EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
    }
}

TEST_F(CliTest, UsageErrorsExitOne) {
    EXPECT_EQ(run("").exit_code, 1);
    EXPECT_EQ(run("frobnicate").exit_code, 1);
    EXPECT_EQ(run("eval-bleu --hyp x").exit_code, 1);
    EXPECT_EQ(run("build-corpus --input x --output y --passages 0").exit_code, 1);
}

TEST_F(CliTest, BuildCorpusGolden) {
    const auto out = dir_ / "corpus";
    const auto r = run("build-corpus --input " + fixture("docs") + " --output " + out.string() +
                       " --passages 2 --train-ratio 0.67 --seed 4");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    for (const char* f : {"train.jsonl", "valid.jsonl", "stats.tsv"}) {
        EXPECT_EQ(read_file(out / f), read_file(kFixtures / "build_corpus" / f)) << f;
    }
    EXPECT_EQ(r.out, read_file(kFixtures / "build_corpus" / "stats.tsv"));
    const auto config = read_file(out / "config.ini");
    EXPECT_NE(config.find("[build-corpus]"), std::string::npos);
    EXPECT_NE(config.find("passages=2"), std::string::npos);
}

TEST_F(CliTest, BuildCorpusRerunIsByteIdentical) {
    const auto out = dir_ / "corpus";
    const std::string args = "build-corpus --input " + fixture("docs") + " --output " + out.string() + " --seed 9";
    ASSERT_EQ(run(args).exit_code, 0);
    std::map<std::string, std::string> first;
    for (const auto& e : fs::directory_iterator(out)) {
        first[e.path().filename().string()] = read_file(e.path());
    }
    ASSERT_EQ(run(args).exit_code, 0);
    for (const auto& [name, bytes] : first) {
        EXPECT_EQ(read_file(out / name), bytes) << name;
    }
}

TEST_F(CliTest, BuildCorpusEmptyDirIsDataError) {
    fs::create_directories(dir_ / "empty");
    const auto r = run("build-corpus --input " + (dir_ / "empty").string() + " --output " + (dir_ / "o").string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_EQ(run("build-corpus --input /nonexistent/dir --output " + (dir_ / "o").string()).exit_code, 2);
}

TEST_F(CliTest, ConfigFileAndOverrides) {
    const auto cfg = dir_ / "run.ini";
    std::ofstream(cfg) << "[build-corpus]\npassages = 2\ntrain-ratio = 0.67\nseed = 4\n";
    const auto out = dir_ / "corpus";
    auto r = run("build-corpus --config " + cfg.string() + " --input " + fixture("docs") + " --output " +
                 out.string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(read_file(out / "train.jsonl"), read_file(kFixtures / "build_corpus" / "train.jsonl"));

    r = run("build-corpus --config " + cfg.string() + " --input " + fixture("docs") + " --output " + out.string() +
            " --passages 1");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(read_file(out / "config.ini").find("passages=1"), std::string::npos);

    std::ofstream(cfg) << "[build-corpus]\npasages = 2\n";
    EXPECT_EQ(run("--config " + cfg.string() + " build-corpus --input " + fixture("docs") + " --output " +
                  out.string())
                  .exit_code,
              1);
}

TEST_F(CliTest, EvalIntrinsicGolden) {
    const auto r = run("eval-intrinsic --ref " + fixture("intrinsic/ref.jsonl") + " --hyp " +
                       fixture("intrinsic/hyp.jsonl") + " --output " + (dir_ / "rep").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(read_file(dir_ / "rep" / "report.txt"), read_file(kFixtures / "intrinsic/expected_report.txt"));
    EXPECT_EQ(read_file(dir_ / "rep" / "intrinsic.tsv"), read_file(kFixtures / "intrinsic/expected_table.tsv"));
    EXPECT_TRUE(fs::exists(dir_ / "rep" / "config.ini"));
}

TEST_F(CliTest, EvalIntrinsicMismatchNamesDocument) {
    const auto r = run("eval-intrinsic --ref " + fixture("intrinsic/ref.jsonl") + " --hyp " +
                       fixture("build_corpus/train.jsonl"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("document"), std::string::npos);
}

TEST_F(CliTest, MalformedJsonlNamesFileAndLine) {
    const auto bad = dir_ / "bad.jsonl";
    std::ofstream(bad) << read_file(kFixtures / "intrinsic/ref.jsonl") << "{not json\n";
    const auto r = run("eval-intrinsic --ref " + bad.string() + " --hyp " + fixture("intrinsic/hyp.jsonl"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("bad.jsonl:3"), std::string::npos) << r.err;
}

TEST_F(CliTest, EvalBleuGolden) {
    const auto r = run("eval-bleu --hyp " + fixture("bleu/hyp") + " --ref " + fixture("bleu/ref") + " --output " +
                       (dir_ / "rep").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(read_file(dir_ / "rep" / "report.txt"), read_file(kFixtures / "bleu/expected_report.txt"));
    EXPECT_EQ(read_file(dir_ / "rep" / "bleu.tsv"), read_file(kFixtures / "bleu/expected_table.tsv"));
}

TEST_F(CliTest, EvalBleuMissingInputIsDataError) {
    const auto r = run("eval-bleu --hyp /nonexistent/hyp --ref " + fixture("bleu/ref"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("/nonexistent/hyp"), std::string::npos);
}

TEST_F(CliTest, EvalClirGolden) {
    const auto r = run("eval-clir --docs " + fixture("clir/docs") + " --queries " + fixture("clir/queries.tsv") +
                       " --judgments " + fixture("clir/judgments.tsv") + " --domains " +
                       fixture("clir/domains.tsv") + " --output " + (dir_ / "rep").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(read_file(dir_ / "rep" / "report.txt"), read_file(kFixtures / "clir/expected_report.txt"));
    EXPECT_EQ(read_file(dir_ / "rep" / "clir.tsv"), read_file(kFixtures / "clir/expected_table.tsv"));
}

TEST_F(CliTest, EvalClirMissingJudgmentsIsDataError) {
    const auto r = run("eval-clir --docs " + fixture("clir/docs") + " --queries " + fixture("clir/queries.tsv") +
                       " --judgments /nonexistent/judgments.tsv");
    EXPECT_EQ(r.exit_code, 2);
}

TEST_F(CliTest, TrainSegmentPipeline) {
    const auto corpus = dir_ / "corpus";
    ASSERT_EQ(run("build-corpus --input " + fixture("docs") + " --output " + corpus.string() +
                  " --passages 2 --train-ratio 0.67 --seed 4")
                  .exit_code,
              0);
    const std::string train_args = "train --train " + (corpus / "train.jsonl").string() + " --valid " +
                                   (corpus / "valid.jsonl").string() +
                                   " --min-freq 1 --word-dim 8 --hidden 4 --max-epochs 3 --seed 5 --output ";
    auto r = run(train_args + (dir_ / "m1").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    ASSERT_EQ(run(train_args + (dir_ / "m2").string()).exit_code, 0);
    EXPECT_EQ(read_file(dir_ / "m1" / "model.ckpt"), read_file(dir_ / "m2" / "model.ckpt"));
    EXPECT_EQ(read_file(dir_ / "m1" / "history.tsv"), read_file(dir_ / "m2" / "history.tsv"));
    EXPECT_EQ(read_file(dir_ / "m1" / "history.tsv").rfind("epoch\tlearning_rate", 0), 0u);

    const std::string model = (dir_ / "m1" / "model.ckpt").string();
    r = run("segment --model " + model + " --ctm " + fixture("segment/conv.ctm") + " --threshold 0 --output " +
            (dir_ / "seg").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(read_file(dir_ / "seg" / "segments.tsv"), read_file(kFixtures / "segment/expected_segments.tsv"));

    r = run("segment --model " + model + " --corpus " + (corpus / "valid.jsonl").string() + " --output " +
            (dir_ / "pred").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    r = run("eval-intrinsic --ref " + (corpus / "valid.jsonl").string() + " --hyp " +
            (dir_ / "pred" / "predictions.jsonl").string());
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("f1="), std::string::npos);
}

TEST_F(CliTest, SegmentRejectsBadInputs) {
    EXPECT_EQ(run("segment --model /nonexistent.ckpt --ctm x --output " + (dir_ / "s").string()).exit_code, 2);
    const auto junk = dir_ / "junk.ckpt";
    std::ofstream(junk) << "not a checkpoint";
    EXPECT_EQ(run("segment --model " + junk.string() + " --ctm x --output " + (dir_ / "s").string()).exit_code, 2);
    EXPECT_EQ(run("segment --model " + junk.string() + " --output " + (dir_ / "s").string()).exit_code, 1);
}

TEST_F(CliTest, SynthIsDeterministic) {
    ASSERT_EQ(run("synth --documents 3 --seed 8 --output " + (dir_ / "a").string()).exit_code, 0);
    ASSERT_EQ(run("synth --documents 3 --seed 8 --output " + (dir_ / "b").string()).exit_code, 0);
    for (const char* f : {"docs/doc00000.txt", "docs/doc00002.txt", "truth/doc00001.txt"}) {
        EXPECT_EQ(read_file(dir_ / "a" / f), read_file(dir_ / "b" / f)) << f;
        EXPECT_FALSE(read_file(dir_ / "a" / f).empty()) << f;
    }
}

}  // namespace
