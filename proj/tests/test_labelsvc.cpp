#include "clonescope/clonescope.hpp"
#include "clonescope/labelsvc_http.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "test_support.hpp"

using namespace clonescope;
using testing_support::TempDir;

namespace {

Method method(const std::string& id) {
    Method m;
    m.id = id;
    m.file = "F.scala";
    m.name = "m" + id;
    m.start_line = 1;
    m.end_line = 10;
    m.raw_body = "def m" + id + "() = 1";
    m.normalized_body = scala::normalize(m.raw_body);
    return m;
}

struct Fixture {
    std::vector<CandidatePair> candidates;
    std::vector<Method> methods;

    explicit Fixture(int n) {
        for (int i = 0; i < n; ++i) {
            const auto a = "a" + std::to_string(i);
            const auto b = "b" + std::to_string(i);
            candidates.push_back({a, b, 0.75});
            methods.push_back(method(a));
            methods.push_back(method(b));
        }
    }
};

}  // namespace

TEST(LabelService, ServesEachPairOncePerRater) {
    TempDir dir;
    Fixture fx(5);
    LabelService svc(fx.candidates, fx.methods, dir / "labels.jsonl");
    std::set<std::string> seen;
    while (auto p = svc.next_pair("alice")) {
        const std::string id = (*p)["pair_id"];
        EXPECT_TRUE(seen.insert(id).second) << id;
        EXPECT_EQ(svc.submit("alice", id, seen.size() % 2 ? "Type3" : "Skip").status, SubmitStatus::Ok);
        EXPECT_EQ((*p)["definitions"].size(), 5U);
        EXPECT_TRUE((*p)["a"].contains("raw_body"));
    }
    EXPECT_EQ(seen.size(), 5U);
    EXPECT_TRUE(svc.next_pair("bob").has_value());
    const auto prog = svc.progress();
    EXPECT_EQ(prog.labeled, 3U);
    EXPECT_EQ(prog.skipped, 2U);
    EXPECT_EQ(prog.consensus, 0U);
    EXPECT_EQ(prog.remaining, 5U);
}

TEST(LabelService, RejectsBadInput) {
    TempDir dir;
    Fixture fx(2);
    LabelService svc(fx.candidates, fx.methods, dir / "labels.jsonl");
    EXPECT_EQ(svc.submit("alice", "nope-pair", "Type1").status, SubmitStatus::NotFound);
    EXPECT_EQ(svc.submit("alice", "a0-b0", "Type5").status, SubmitStatus::Invalid);
    EXPECT_EQ(svc.submit("", "a0-b0", "Type1").status, SubmitStatus::Invalid);
    EXPECT_EQ(svc.submit(std::string(129, 'r'), "a0-b0", "Type1").status, SubmitStatus::Invalid);
    EXPECT_EQ(svc.submit(std::string(128, 'r'), "a0-b0", "Type1").status, SubmitStatus::Ok);
    EXPECT_EQ(svc.progress().labeled, 1U);
}

TEST(LabelService, UnknownMethodInCandidatesIsArtifactError) {
    TempDir dir;
    Fixture fx(1);
    fx.methods.pop_back();
    EXPECT_THROW(LabelService(fx.candidates, fx.methods, dir / "l.jsonl"), ArtifactError);
}

TEST(LabelService, ConsensusAndExport) {
    TempDir dir;
    Fixture fx(3);
    LabelService svc(fx.candidates, fx.methods, dir / "labels.jsonl");
    svc.submit("r1", "a0-b0", "Type2");
    svc.submit("r2", "a0-b0", "Type2");
    svc.submit("r1", "a1-b1", "Type1");
    svc.submit("r2", "a1-b1", "NotClone");
    const auto truth = svc.export_truth();
    ASSERT_EQ(truth.size(), 1U);
    EXPECT_EQ(truth[0].pair, "a0-b0");
    EXPECT_EQ(truth[0].label, Label::Type2);
    EXPECT_EQ(svc.progress().consensus, 1U);
    EXPECT_EQ(svc.progress().remaining, 2U);
}

TEST(LabelService, SkipNeverErasesLabel) {
    TempDir dir;
    Fixture fx(1);
    {
        LabelService svc(fx.candidates, fx.methods, dir / "labels.jsonl");
        svc.submit("r1", "a0-b0", "Type4");
        svc.submit("r1", "a0-b0", "Skip");
        EXPECT_EQ(svc.records().size(), 1U);
    }
    LabelService again(fx.candidates, fx.methods, dir / "labels.jsonl");
    ASSERT_EQ(again.records().size(), 1U);
    EXPECT_EQ(again.records()[0].label, Label::Type4);
}

TEST(LabelService, SecondRaterFirstPrefersSingleLabeledPairs) {
    TempDir dir;
    Fixture fx(10);
    LabelService svc(fx.candidates, fx.methods, dir / "labels.jsonl", {.second_rater_first = true, .seed = 3});
    svc.submit("r1", "a7-b7", "Type3");
    for (int i = 0; i < 5; ++i) EXPECT_EQ((*svc.next_pair("r2"))["pair_id"], "a7-b7");
}

TEST(LabelStore, SurvivesRestartAndCompacts) {
    TempDir dir;
    Fixture fx(4);
    const auto path = dir / "labels.jsonl";
    {
        LabelService svc(fx.candidates, fx.methods, path);
        svc.submit("r1", "a0-b0", "Type1");
        svc.submit("r1", "a0-b0", "Type2");
        svc.submit("r2", "a0-b0", "Type2");
        svc.submit("r1", "a3-b3", "Skip");
    }
    // Every acknowledged label is on disk before the service goes away.
    EXPECT_EQ(testing_support::run("wc -l < '" + path.string() + "'").out, "4\n");
    LabelService svc(fx.candidates, fx.methods, path);
    EXPECT_EQ(testing_support::run("wc -l < '" + path.string() + "'").out, "3\n");
    EXPECT_EQ(svc.progress().labeled, 2U);
    EXPECT_EQ(svc.progress().skipped, 1U);
    ASSERT_EQ(svc.export_truth().size(), 1U);
    EXPECT_EQ(svc.export_truth()[0].label, Label::Type2);
    // The skipped pair stays hidden from r1 after the restart.
    for (int i = 0; i < 20; ++i) {
        auto p = svc.next_pair("r1");
        ASSERT_TRUE(p);
        EXPECT_NE((*p)["pair_id"], "a3-b3");
        EXPECT_NE((*p)["pair_id"], "a0-b0");
    }
}

TEST(LabelStore, CorruptJournalIsArtifactError) {
    TempDir dir;
    testing_support::write_file(dir / "labels.jsonl", "{\"pair\":\"a-b\",\"rater\":\"r\",\"label\":\"Type9\"}\n");
    EXPECT_THROW(LabelStore(dir / "labels.jsonl"), ArtifactError);
}

TEST(LabelService, ConcurrentSubmissionsAreAllJournaled) {
    TempDir dir;
    Fixture fx(50);
    const auto path = dir / "labels.jsonl";
    {
        LabelService svc(fx.candidates, fx.methods, path);
        std::vector<std::thread> threads;
        for (int t = 0; t < 4; ++t) {
            threads.emplace_back([&svc, &fx, t] {
                for (const auto& c : fx.candidates) svc.submit("r" + std::to_string(t), c.key(), "Type3");
            });
        }
        for (auto& th : threads) th.join();
        EXPECT_EQ(svc.progress().labeled, 200U);
    }
    EXPECT_EQ(read_label_journal(path).size(), 200U);
}

class LabelHttp : public ::testing::Test {
protected:
    void SetUp() override {
        svc_ = std::make_unique<LabelService>(fx_.candidates, fx_.methods, dir_ / "labels.jsonl");
        testing_support::write_file(dir_ / "ui/index.html", "<html>labeling</html>");
        install_routes(server_, *svc_, dir_ / "ui");
        port_ = server_.bind_to_any_port("127.0.0.1");
        ASSERT_GT(port_, 0);
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    void TearDown() override {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }
    httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

    TempDir dir_;
    Fixture fx_{2};
    std::unique_ptr<LabelService> svc_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

TEST_F(LabelHttp, RoundTrip) {
    auto cli = client();
    auto missing = cli.Get("/api/pair");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 400);

    std::set<std::string> served;
    for (const auto& rater : {"r1", "r2"}) {
        while (true) {
            auto res = cli.Get(std::string("/api/pair?rater=") + rater);
            ASSERT_TRUE(res);
            if (res->status == 204) break;
            ASSERT_EQ(res->status, 200);
            const auto pair = json::parse(res->body);
            served.insert(pair["pair_id"]);
            const json body{{"rater", rater}, {"pair_id", pair["pair_id"]}, {"label", "Type1"}};
            auto ack = cli.Post("/api/label", body.dump(), "application/json");
            ASSERT_TRUE(ack);
            EXPECT_EQ(ack->status, 200);
            EXPECT_TRUE(json::parse(ack->body)["ok"].get<bool>());
        }
    }
    EXPECT_EQ(served.size(), 2U);

    auto prog = cli.Get("/api/progress");
    ASSERT_TRUE(prog);
    const auto p = json::parse(prog->body);
    EXPECT_EQ(p["labeled"], 4);
    EXPECT_EQ(p["consensus"], 2);
    EXPECT_EQ(p["remaining"], 0);

    auto exp = cli.Get("/api/export");
    ASSERT_TRUE(exp);
    EXPECT_EQ(exp->status, 200);
    std::vector<json> lines;
    std::istringstream rows(exp->body);
    for (std::string line; std::getline(rows, line);) lines.push_back(json::parse(line));
    ASSERT_EQ(lines.size(), 2U);
    EXPECT_EQ(lines[0]["label"], "Type1");
    EXPECT_EQ(lines[0]["supporting_raters"], 2);

    auto ui = cli.Get("/index.html");
    ASSERT_TRUE(ui);
    EXPECT_EQ(ui->body, "<html>labeling</html>");
}

TEST_F(LabelHttp, ErrorStatuses) {
    auto cli = client();
    EXPECT_EQ(cli.Post("/api/label", "not json", "application/json")->status, 400);
    EXPECT_EQ(cli.Post("/api/label", R"({"rater":"r"})", "application/json")->status, 400);
    EXPECT_EQ(cli.Post("/api/label", R"({"rater":"r","pair_id":"x-y","label":"Type1"})", "application/json")->status,
              404);
    EXPECT_EQ(cli.Post("/api/label", R"({"rater":"r","pair_id":"a0-b0","label":"Maybe"})", "application/json")->status,
              400);
}
