#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <regex>
#include <sstream>

#include "gazekit/csv.hpp"
#include "gazekit/map_io.hpp"
#include "gazekit/saliency_metrics.hpp"
#include "oracles.hpp"

using namespace gazekit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int status = -1;
    std::string out;
    std::string err;
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        static int counter = 0;
        dir_ = fs::temp_directory_path() / ("gazekit_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path p(const std::string& rel) const { return dir_ / rel; }

    Outcome run(const std::string& args, const std::string& input = "") const {
        write_text_file(p("stdin.txt"), input);
        const std::string cmd = std::string("'") + GAZEKIT_CLI_PATH + "' " + args + " < '" + p("stdin.txt").string() +
                                "' > '" + p("stdout.txt").string() + "' 2> '" + p("stderr.txt").string() + "'";
        const int raw = std::system(cmd.c_str());
        Outcome r;
        r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        r.out = read_text_file(p("stdout.txt"));
        r.err = read_text_file(p("stderr.txt"));
        return r;
    }

    std::string q(const std::string& rel) const { return "'" + p(rel).string() + "'"; }

    void write_map(const std::string& rel, const Grid& g) const {
        fs::create_directories(p(rel).parent_path());
        write_grid(p(rel), g);
    }

    fs::path dir_;
};

double cell(const CsvTable& t, const std::string& id, const std::string& col) {
    for (const auto& r : t.rows)
        if (r[0] == id) return std::stod(r[t.column(col)]);
    ADD_FAILURE() << "no row " << id;
    return NAN;
}

}  // namespace

TEST_F(CliTest, EvaluateSelfScoresPerfectly) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 3; ++i) {
        const auto m = oracle::random_map(rng, 12, 10);
        const std::string name = "f" + std::to_string(i) + (i == 1 ? ".csv" : ".pgm");
        write_map("maps/" + name, m.grid());
        const auto stored = read_gaze_map(p("maps/" + name));
        const auto peak = std::max_element(stored.values().begin(), stored.values().end()) - stored.values().begin();
        Grid fix(12, 10, 0.0);
        fix.values[static_cast<std::size_t>(peak)] = 1.0;
        write_map("fix/" + name, fix);
    }
    const auto r = run("evaluate --pred-dir " + q("maps") + " --gt-dir " + q("maps") + " --fix-dir " + q("fix") +
                       " --out " + q("m.csv") + " --seed 3");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto t = parse_csv_table(read_text_file(p("m.csv")));
    EXPECT_EQ(t.header, (CsvRow{"id", "cc", "kl", "sim", "auc_j", "auc_b", "nss"}));
    EXPECT_EQ(t.rows.size(), 4u);
    EXPECT_NEAR(cell(t, "mean", "cc"), 1.0, 1e-6);
    EXPECT_NEAR(cell(t, "mean", "kl"), 0.0, 1e-6);
    EXPECT_NEAR(cell(t, "mean", "sim"), 1.0, 1e-6);
    EXPECT_NEAR(cell(t, "mean", "auc_j"), 1.0, 1e-9);
}

TEST_F(CliTest, EvaluateUnpairedFileExitsTwo) {
    write_map("pred/a.csv", Grid(2, 2, {1, 2, 3, 4}));
    write_map("pred/b.csv", Grid(2, 2, {1, 2, 3, 4}));
    write_map("gt/a.csv", Grid(2, 2, {4, 3, 2, 1}));
    const auto r = run("evaluate --pred-dir " + q("pred") + " --gt-dir " + q("gt") + " --out " + q("m.csv"));
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("b.csv"), std::string::npos);
    EXPECT_FALSE(fs::exists(p("m.csv")));
}

TEST_F(CliTest, EvaluateWithoutFixationsRecordsSkip) {
    write_map("pred/a.csv", Grid(2, 2, {1, 2, 3, 4}));
    write_map("gt/a.csv", Grid(2, 2, {1, 1, 1, 1}));
    const auto r = run("evaluate --pred-dir " + q("pred") + " --gt-dir " + q("gt") + " --out " + q("m.csv"));
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("skipped"), std::string::npos);
    const auto t = parse_csv_table(read_text_file(p("m.csv")));
    EXPECT_EQ(t.rows[0][1], "ZeroVariance");
    EXPECT_EQ(t.rows[0][4], "skipped");
    EXPECT_EQ(t.rows[0][6], "skipped");
    EXPECT_EQ(t.rows[1][1], "NA");
}

TEST_F(CliTest, EvaluateIsDeterministic) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 2; ++i) {
        const std::string name = std::to_string(i) + ".pgm";
        write_map("pred/" + name, oracle::random_map(rng, 16, 16).grid());
        write_map("gt/" + name, oracle::random_map(rng, 16, 16).grid());
        Grid fix(16, 16, 0.0);
        for (int k = 0; k < 10; ++k) fix.values[rng() % 256] = 1.0;
        write_map("fix/" + name, fix);
    }
    const std::string args = "evaluate --pred-dir " + q("pred") + " --gt-dir " + q("gt") + " --fix-dir " + q("fix") +
                             " --seed 99 --n-splits 50 --out ";
    ASSERT_EQ(run(args + q("one.csv")).status, 0);
    ASSERT_EQ(run(args + q("two.csv")).status, 0);
    EXPECT_EQ(read_text_file(p("one.csv")), read_text_file(p("two.csv")));
}

TEST_F(CliTest, CurateTwoRegimeVideo) {
    const auto maps = oracle::two_regime_sequence(60, 10);
    for (std::size_t t = 0; t < maps.size(); ++t) {
        char name[32];
        std::snprintf(name, sizeof name, "clip/frame_%03zu.pgm", t);
        write_map(std::string("videos/") + name, maps[t].grid());
    }
    for (std::size_t t = 0; t < 40; ++t) {
        char name[32];
        std::snprintf(name, sizeof name, "short/%02zu.csv", t);
        write_map(std::string("videos/") + name, maps[t].grid());
    }
    const auto r = run("curate --input-dir " + q("videos") + " --out " + q("manifest.csv"));
    ASSERT_EQ(r.status, 0) << r.err;
    const auto t = parse_csv_table(read_text_file(p("manifest.csv")));
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][0], "clip");
    EXPECT_EQ(t.rows[0][1], "9");
    EXPECT_EQ(t.rows[0][2], "12");
    EXPECT_EQ(t.rows[0][3], "3");
    EXPECT_NE(t.rows[0][6].find("clip/frame_009.pgm"), std::string::npos);
    EXPECT_NE(r.out.find("clip: frames=60 pairs=1"), std::string::npos);
    EXPECT_NE(r.out.find("short: frames=40 pairs=0"), std::string::npos);

    ASSERT_EQ(run("curate --input-dir " + q("videos") + " --out " + q("again.csv")).status, 0);
    EXPECT_EQ(read_text_file(p("manifest.csv")), read_text_file(p("again.csv")));
}

TEST_F(CliTest, CurateShortVideosGiveEmptyManifest) {
    for (std::size_t t = 0; t < 40; ++t) write_map("videos/v/" + std::to_string(100 + t) + ".csv", Grid(3, 3, 1.0 + t % 3));
    const auto r = run("curate --input-dir " + q("videos") + " --out " + q("manifest.csv"));
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(read_text_file(p("manifest.csv")),
              "video_id,anchor,target,delta,anchor_peak_kl,pair_kl,anchor_map_path,target_map_path,caption\n");
}

TEST_F(CliTest, CurateSkipsUnreadableVideo) {
    const auto maps = oracle::two_regime_sequence(60, 10);
    for (std::size_t t = 0; t < 60; ++t) write_map("videos/good/" + std::to_string(100 + t) + ".csv", maps[t].grid());
    fs::create_directories(p("videos/bad"));
    write_text_file(p("videos/bad/000.csv"), "1,2\n3\n");
    fs::create_directories(p("videos/empty"));
    const auto r = run("curate --input-dir " + q("videos") + " --out " + q("manifest.csv"));
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("bad"), std::string::npos);
    EXPECT_NE(r.err.find("empty"), std::string::npos);
    EXPECT_EQ(parse_csv_table(read_text_file(p("manifest.csv"))).rows.size(), 1u);
}

TEST_F(CliTest, CaptionEvalIdentity) {
    write_text_file(p("c.txt"), "the red car stops here\na bike turns left now\n");
    const auto r = run("caption-eval --candidates " + q("c.txt") + " --references " + q("c.txt"));
    ASSERT_EQ(r.status, 0) << r.err;
    const auto t = parse_csv_table(r.out);
    EXPECT_EQ(t.header, (CsvRow{"row", "bleu", "rouge_l", "cider_base", "error"}));
    EXPECT_EQ(cell(t, "mean", "bleu"), 1.0);
    EXPECT_EQ(cell(t, "mean", "rouge_l"), 1.0);
}

TEST_F(CliTest, CaptionEvalLineMismatch) {
    write_text_file(p("c.txt"), "a\nb\n");
    write_text_file(p("r.txt"), "a\n");
    EXPECT_EQ(run("caption-eval --candidates " + q("c.txt") + " --references " + q("r.txt")).status, 2);
}

TEST_F(CliTest, CaptionEvalHandFixture) {
    write_text_file(p("c.txt"), "a b c d\nthe the the\nx y\n");
    write_text_file(p("r.txt"), "a c d e\nthe cat\tthe dog\nx y\n");
    const auto r = run("caption-eval --candidates " + q("c.txt") + " --references " + q("r.txt") + " --out " + q("s.csv"));
    ASSERT_EQ(r.status, 0) << r.err;
    const auto t = parse_csv_table(read_text_file(p("s.csv")));
    // Row 1: LCS 3 of 4 both ways. Row 2: clipped unigram 1/3, no bigrams. Row 3: exact but only 2 tokens.
    EXPECT_NEAR(cell(t, "1", "rouge_l"), 0.75, 1e-9);
    EXPECT_NEAR(cell(t, "1", "bleu"), 0.0, 1e-9);
    EXPECT_NEAR(cell(t, "2", "bleu"), 0.0, 1e-9);
    const double lcs_row2 = (1 + 1.44) * (1.0 / 3) * 0.5 / (0.5 + 1.44 / 3);
    EXPECT_NEAR(cell(t, "2", "rouge_l"), lcs_row2, 1e-8);
    EXPECT_NEAR(cell(t, "3", "rouge_l"), 1.0, 1e-9);
    EXPECT_NEAR(cell(t, "mean", "rouge_l"), (0.75 + lcs_row2 + 1.0) / 3, 1e-8);
}

TEST_F(CliTest, CaptionEvalPerFieldFlagsMalformedRow) {
    const std::string good = "Scene: road | Current: car | Next: light | Why: red";
    write_text_file(p("c.txt"), good + "\nScene: x | Current: y | Why: z\n" + good + "\n");
    write_text_file(p("r.txt"), good + "\n" + good + "\n" + good + "\n");
    const auto r = run("caption-eval --per-field --candidates " + q("c.txt") + " --references " + q("r.txt"));
    ASSERT_EQ(r.status, 0) << r.err;
    const auto t = parse_csv_table(r.out);
    EXPECT_EQ(t.rows[1][4], "MissingField(next)");
    EXPECT_EQ(t.rows[0][4], "");
    EXPECT_EQ(cell(t, "3", "rouge_l"), 1.0);
}

TEST_F(CliTest, GradCheckPassesAndIsDeterministic) {
    const auto a = run("grad-check --seed 5 --trials 100");
    EXPECT_EQ(a.status, 0) << a.out;
    EXPECT_NE(a.out.find("overall PASS"), std::string::npos);
    for (const char* name : {"loss_gaze", "loss_caption", "info_nce", "pool_project_info_nce"}) {
        EXPECT_NE(a.out.find(std::string(name) + " trials=100"), std::string::npos);
    }
    EXPECT_EQ(run("grad-check --seed 5 --trials 100").out, a.out);
}

TEST_F(CliTest, GradCheckCorruptionFails) {
    const auto r = run("grad-check --trials 3 --corrupt");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, FitDemo) {
    ASSERT_EQ(run("fit-demo --grid-size 16 --steps 500 --lr 1.0 --out " + q("a.csv")).status, 0);
    const auto t = parse_csv_table(read_text_file(p("a.csv")));
    EXPECT_EQ(t.header, (CsvRow{"step", "loss", "entropy"}));
    ASSERT_EQ(t.rows.size(), 501u);
    EXPECT_LT(std::stod(t.rows.back()[1]), 0.05);
    ASSERT_EQ(run("fit-demo --grid-size 16 --steps 500 --lr 1.0 --out " + q("b.csv")).status, 0);
    EXPECT_EQ(read_text_file(p("a.csv")), read_text_file(p("b.csv")));

    const auto h = run("fit-demo --hinge --target uniform --steps 1");
    ASSERT_EQ(h.status, 0);
    EXPECT_NEAR(std::stod(parse_csv_table(h.out).rows[0][1]), 0.015, 1e-12);
}

TEST_F(CliTest, FitDemoRejectsUnknownTarget) {
    EXPECT_EQ(run("fit-demo --target ring").status, 2);
    EXPECT_EQ(run("fit-demo --steps").status, 2);
}

TEST_F(CliTest, ReportDominanceAndDegenerate) {
    write_text_file(p("a.csv"), "id,cc,kl,sim,auc_j,auc_b,nss\nmean,0.9,0.5,0.8,0.95,0.9,3\n");
    write_text_file(p("b.csv"), "id,cc,kl,sim,auc_j,auc_b,nss\nmean,0.5,1.5,0.4,0.8,0.7,1\n");
    ASSERT_EQ(run("report --table " + q("a.csv") + " --table " + q("b.csv") + " --out " + q("r.svg")).status, 0);
    const auto svg = read_text_file(p("r.svg"));
    EXPECT_NE(svg.find("data-label=\"a\" data-radii=\"1 1 1 1 1 1\""), std::string::npos);
    EXPECT_NE(svg.find("data-label=\"b\" data-radii=\"0 0 0 0 0 0\""), std::string::npos);

    const auto same = run("report --table " + q("a.csv") + " --table " + q("a.csv") + " --label x --label y --out " +
                          q("s.svg"));
    ASSERT_EQ(same.status, 0);
    EXPECT_NE(same.err.find("DegenerateRange"), std::string::npos);
    EXPECT_NE(read_text_file(p("s.svg")).find("data-radii=\"0.5 0.5 0.5 0.5 0.5 0.5\""), std::string::npos);
}

TEST_F(CliTest, ReportInputErrors) {
    write_text_file(p("a.csv"), "id,cc,kl,sim,auc_j,auc_b,nss\nmean,0.9,0.5,0.8,0.95,0.9,NA\n");
    EXPECT_EQ(run("report --table " + q("a.csv") + " --out " + q("r.svg")).status, 2);
    EXPECT_EQ(run("report --table " + q("a.csv") + " --table " + q("a.csv") + " --out " + q("r.svg")).status, 2);
}

TEST_F(CliTest, ReviewAcceptAll) {
    write_text_file(p("m.csv"),
                    "video_id,anchor,target,caption\n"
                    "v,9,12,Scene: a | Current: b | Next: c | Why: d\n"
                    "v,40,43,Scene: e | Current: f | Next: g | Why: h\n");
    const auto r = run("review --manifest " + q("m.csv") + " --decisions-out " + q("d.csv"), "a\na\n");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto t = parse_csv_table(read_text_file(p("d.csv")));
    ASSERT_EQ(t.column("decision"), 4u);
    EXPECT_EQ(t.rows[0][4], "accept");
    EXPECT_EQ(t.rows[1][4], "accept");
}

TEST_F(CliTest, ReviewEditIsValidated) {
    write_text_file(p("m.csv"),
                    "video_id,anchor,target,caption\n"
                    "v,9,12,Scene: a | Current: b | Why: d\n"
                    "v,40,43,Scene: e | Current: f | Next: g | Why: h\n");
    // Row 1 is malformed: 'a' is not accepted, a bad edit is refused, then a good one lands.
    const auto r = run("review --manifest " + q("m.csv") + " --decisions-out " + q("d.csv"),
                       "Scene: still | Current: broken\nscene: a | current: b | next: c | why: d\ne\nScene: E | Current: F | Next: G | Why: H\n");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("MissingField(next)"), std::string::npos);
    const auto t = parse_csv_table(read_text_file(p("d.csv")));
    EXPECT_EQ(t.rows[0][3], "Scene: a | Current: b | Next: c | Why: d");
    EXPECT_EQ(t.rows[0][4], "edited");
    EXPECT_EQ(t.rows[1][3], "Scene: E | Current: F | Next: G | Why: H");
    EXPECT_EQ(t.rows[1][4], "edited");
}

TEST_F(CliTest, ReviewResumesWithoutRedeciding) {
    std::string manifest = "video_id,anchor,target,caption\n";
    for (int i = 0; i < 4; ++i) manifest += "v," + std::to_string(i * 20) + ",3,Scene: a | Current: b | Next: c | Why: d\n";
    write_text_file(p("m.csv"), manifest);
    const std::string args = "review --manifest " + q("m.csv") + " --decisions-out " + q("d.csv");
    ASSERT_EQ(run(args, "a\nr\nq\n").status, 0);
    auto t = parse_csv_table(read_text_file(p("d.csv")));
    EXPECT_EQ(t.rows[0][4], "accept");
    EXPECT_EQ(t.rows[1][4], "reject");
    EXPECT_EQ(t.rows[2][4], "");
    // Second session: two answers cover exactly the two remaining rows; the extra
    // input would flip a row if anything were decided twice.
    const auto r = run(args, "r\na\nr\nr\n");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("resuming"), std::string::npos);
    t = parse_csv_table(read_text_file(p("d.csv")));
    EXPECT_EQ(t.rows[0][4], "accept");
    EXPECT_EQ(t.rows[1][4], "reject");
    EXPECT_EQ(t.rows[2][4], "reject");
    EXPECT_EQ(t.rows[3][4], "accept");
    EXPECT_NE(r.out.find("decided 2 rows this session; 4/4"), std::string::npos);
}

TEST_F(CliTest, ValidateCaptions) {
    write_text_file(p("m.csv"),
                    "video_id,caption\nv,Scene: a | Current: b | Next: c | Why: d\nw,Scene: x | Current: y | Why: z\n");
    const auto r = run("validate-captions --manifest " + q("m.csv"));
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("row 2: MissingField(next)"), std::string::npos);
    EXPECT_NE(r.out.find("valid=1 invalid=1 total=2"), std::string::npos);
    write_text_file(p("ok.csv"), "caption\nScene: a | Current: b | Next: c | Why: d\n");
    EXPECT_EQ(run("validate-captions --manifest " + q("ok.csv")).status, 0);
    EXPECT_EQ(run("validate-captions --manifest " + q("missing.csv")).status, 2);
}

TEST_F(CliTest, UnknownSubcommandIsInputError) {
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("--help").status, 0);
}
