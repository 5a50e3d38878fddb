#include <gtest/gtest.h>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <thread>

#include "doris/annotator.hpp"
#include "doris/api.hpp"
#include "httplib.h"
#include "test_support.hpp"

namespace doris {
namespace {

struct Run {
  int exitCode = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " " + DORIS_CLI + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

SearchIndex buildIndex(bool extra = false) {
  auto docs = testing::fixtureCorpus();
  if (extra) docs.push_back(testing::makeDoc("zz-extra", "More oil."));
  auto taxonomy = TopicTaxonomy::load(testing::dataPath("taxonomy.json"));
  auto ann = annotateCorpus(docs, taxonomy);
  return SearchIndex::build(docs, ann, std::move(taxonomy));
}

// `doris serve` as a child process with stdout on a pipe.
class ServeProcess {
 public:
  explicit ServeProcess(const std::filesystem::path& index) {
    int fds[2];
    if (pipe(fds) != 0) return;
    pid_ = fork();
    if (pid_ == 0) {
      dup2(fds[1], STDOUT_FILENO);
      close(fds[0]);
      close(fds[1]);
      if (int null = open("/dev/null", O_WRONLY); null >= 0) dup2(null, STDERR_FILENO);
      execl(DORIS_CLI, DORIS_CLI, "serve", "--index", index.c_str(), "--bind", "127.0.0.1:0",
            static_cast<char*>(nullptr));
      _exit(127);
    }
    close(fds[1]);
    out_ = fdopen(fds[0], "r");
    char* line = nullptr;
    std::size_t cap = 0;
    if (getline(&line, &cap, out_) > 0) firstLine_ = line;
    free(line);
    if (auto colon = firstLine_.rfind(':'); colon != std::string::npos) {
      port_ = std::atoi(firstLine_.c_str() + colon + 1);
    }
  }
  ~ServeProcess() {
    if (pid_ > 0 && !reaped_) {
      kill(pid_, SIGKILL);
      waitpid(pid_, nullptr, 0);
    }
    if (out_ != nullptr) fclose(out_);
  }

  const std::string& firstLine() const { return firstLine_; }
  int port() const { return port_; }
  void signal(int sig) const { kill(pid_, sig); }

  int wait() {
    int status = 0;
    waitpid(pid_, &status, 0);
    reaped_ = true;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  // Polls /api/health until `pred` holds for the response or time runs out.
  template <typename Pred>
  httplib::Result awaitHealth(Pred pred) const {
    httplib::Client client("127.0.0.1", port_);
    for (int i = 0; i < 300; ++i) {
      auto res = client.Get("/api/health");
      if (res && pred(*res)) return res;
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    return client.Get("/api/health");
  }

 private:
  pid_t pid_ = -1;
  FILE* out_ = nullptr;
  std::string firstLine_;
  int port_ = 0;
  bool reaped_ = false;
};

TEST(Cli, UsageErrorsExitTwo) {
  testing::TempDir dir;
  buildIndex().save(dir / "doris.idx");
  const std::string index = " --index " + (dir / "doris.idx").string();
  EXPECT_EQ(run("query \"\"" + index).exitCode, 2);
  EXPECT_EQ(run("query oil --kind Memo" + index).exitCode, 2);
  EXPECT_EQ(run("query oil --aggregate year_kind" + index).exitCode, 2);
  EXPECT_EQ(run("frobnicate").exitCode, 2);
  EXPECT_EQ(run("").exitCode, 2);
  EXPECT_EQ(run("serve --bind nonsense" + index).exitCode, 2);
}

TEST(Cli, DataErrorsExitOne) {
  testing::TempDir dir;
  EXPECT_EQ(run("query oil --index " + (dir / "missing.idx").string()).exitCode, 1);
  dir.write("bad.idx", "not an index");
  EXPECT_EQ(run("query oil --index " + (dir / "bad.idx").string()).exitCode, 1);
  dir.write("t.json", R"({"topics":[{"id":"a","parents":["a"],"keywords":{"positive":["x"]}}]})");
  EXPECT_EQ(run("taxonomy validate " + (dir / "t.json").string()).exitCode, 1);
}

TEST(Cli, QueryMatchesHandler) {
  testing::TempDir dir;
  auto index = buildIndex();
  index.save(dir / "doris.idx");
  auto r = run("query oil --format json --index " + (dir / "doris.idx").string());
  ASSERT_EQ(r.exitCode, 0);
  EXPECT_EQ(r.out, handleSearch(index, {{"q", "oil"}}).body);

  // the environment variable wins over --index
  auto env = run("query oil --format json --index /nonexistent.idx",
                 "DORIS_INDEX=" + (dir / "doris.idx").string());
  EXPECT_EQ(env.exitCode, 0);
  EXPECT_EQ(env.out, r.out);

  auto agg = run("query oil --aggregate author_kind --format json --index " + (dir / "doris.idx").string());
  EXPECT_EQ(agg.out, handleAggregate(index, {{"q", "oil"}, {"mode", "author_kind"}}).body);

  auto text = run("query oil --index " + (dir / "doris.idx").string());
  EXPECT_EQ(text.exitCode, 0);
  EXPECT_TRUE(text.out.starts_with("9 matching docs, page 1\n")) << text.out;
}

TEST(Cli, ServeMatchesQueryAndReloadsOnHangup) {
  testing::TempDir dir;
  const auto path = dir / "doris.idx";
  auto first = buildIndex();
  first.save(path);

  ServeProcess serve(path);
  ASSERT_TRUE(serve.firstLine().starts_with("listening on http://127.0.0.1:")) << serve.firstLine();
  ASSERT_GT(serve.port(), 0);
  auto ready = serve.awaitHealth([](const httplib::Response& r) { return r.status == 200; });
  ASSERT_TRUE(ready);
  EXPECT_EQ(ready->get_header_value("X-Corpus-Version"), first.buildHash());

  httplib::Client client("127.0.0.1", serve.port());
  auto http = client.Get("/api/search?q=oil&kind=ExecutiveAction&yearFrom=1980");
  ASSERT_TRUE(http);
  auto cli = run("query oil --kind ExecutiveAction --year-from 1980 --format json --index " + path.string());
  EXPECT_EQ(cli.out, http->body);

  auto second = buildIndex(true);
  second.save(path);
  serve.signal(SIGHUP);
  auto reloaded = serve.awaitHealth([&](const httplib::Response& r) {
    return r.get_header_value("X-Corpus-Version") == second.buildHash();
  });
  ASSERT_TRUE(reloaded);
  EXPECT_EQ(reloaded->get_header_value("X-Corpus-Version"), second.buildHash());

  serve.signal(SIGTERM);
  EXPECT_EQ(serve.wait(), 0);
}

}  // namespace
}  // namespace doris
