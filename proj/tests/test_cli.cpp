// Runs the freemono binary as a subprocess.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef FREEMONO_CLI_PATH
#error "FREEMONO_CLI_PATH must be defined"
#endif
#ifndef FREEMONO_DATA_DIR
#error "FREEMONO_DATA_DIR must be defined"
#endif

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(FREEMONO_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& body) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

TEST(Cli, DecideExitCodes) {
  auto yes = run("decide -n 2 -u a -v abA");
  EXPECT_EQ(yes.status, 0);
  EXPECT_EQ(yes.out, "YES\n");
  auto no = run("decide -n 2 -u aa -v aaa");
  EXPECT_EQ(no.status, 1);
  EXPECT_EQ(no.out, "NO\n");
  EXPECT_EQ(run("decide -n 2 -u aabb -v aa").status, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("decide -n 2 -u c -v a").status, 2);
  EXPECT_EQ(run("decide -n 2 -u a%b -v a").status, 2);
  EXPECT_EQ(run("decide -n 2 -u a").status, 2);
  EXPECT_EQ(run("decide -n 2 -u a -v b --strategy fast").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("nonsense").status, 2);
  EXPECT_EQ(run("decide-multi -n 2 -u 'a;b' -v a").status, 2);
  EXPECT_EQ(run("corpus /nonexistent/file.tsv").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST(Cli, WitnessLines) {
  auto r = run("decide -n 2 -u ab -v aa --witness");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "YES\nf(x1)=b\nf(x2)=Baa\n");
}

TEST(Cli, JsonRoundTrip) {
  auto r = run("decide -n 2 -u ab -v aa --format json");
  ASSERT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("answer"), "YES");
  EXPECT_EQ(j.at("witness"), nlohmann::json::array({"b", "Baa"}));
  EXPECT_TRUE(j.at("trace").contains("candidates"));
  EXPECT_TRUE(j.at("timings").contains("candidate_generation"));
  EXPECT_TRUE(j.at("timings").contains("whitehead"));
  // The witness is valid input again.
  auto w = j.at("witness");
  auto again = run("stallings -n 2 -u '" + w[0].get<std::string>() + ";" +
                   w[1].get<std::string>() + "' --format json");
  ASSERT_EQ(again.status, 0);
  EXPECT_EQ(nlohmann::json::parse(again.out).at("rank"), 2);

  auto no = run("decide -n 2 -u aa -v aaa --format json");
  EXPECT_EQ(no.status, 1);
  auto jn = nlohmann::json::parse(no.out);
  EXPECT_EQ(jn.at("answer"), "NO");
  EXPECT_TRUE(jn.at("witness").is_null());
}

TEST(Cli, Strategies) {
  EXPECT_EQ(run("decide -n 2 -u ab -v aa --strategy exhaustive").status, 0);
  EXPECT_EQ(run("decide -n 2 -u aa -v aaa --strategy exhaustive").status, 1);
}

TEST(Cli, DecideMulti) {
  EXPECT_EQ(run("decide-multi -n 2 -u 'a;b' -v 'b;a'").status, 0);
  EXPECT_EQ(run("decide-multi -n 2 -u 'a;a' -v 'a;b'").status, 1);
}

TEST(Cli, Topo) {
  auto r = run("topo -g 1");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "2 graphs");
  auto j = nlohmann::json::parse(run("topo -g 2 --format json").out);
  EXPECT_EQ(j.at("count"), 14);
}

TEST(Cli, Candidates) {
  auto r = run("candidates -n 2 -v aa");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "basis=[a] w=aa");
}

TEST(Cli, StallingsAndWhitehead) {
  EXPECT_EQ(run("stallings -n 2 -u 'aa;ab' -v Ab").status, 0);
  EXPECT_EQ(run("stallings -n 2 -u 'aa;ab' -v bb").status, 1);
  EXPECT_EQ(run("whitehead -n 2 -u ab -v b").status, 0);
  EXPECT_EQ(run("whitehead -n 2 -u aa -v ab").status, 1);
  auto m = run("whitehead -n 2 -u abab");
  EXPECT_EQ(m.out.substr(0, m.out.find('\n')), "bb");
}

TEST(Cli, Oracle) {
  EXPECT_EQ(run("oracle -n 2 -u ab -v aa --bound 3").status, 0);
  EXPECT_EQ(run("oracle -n 2 -u aa -v aaa --bound 2").status, 1);
}

TEST(Cli, Corpus) {
  auto ok = run(std::string("corpus ") + FREEMONO_DATA_DIR + "/corpus.tsv");
  EXPECT_EQ(ok.status, 0) << ok.out;
  EXPECT_NE(ok.out.find("mismatches 0"), std::string::npos);

  auto wrong = temp_file("wrong.tsv", "2\ta\tabA\tNO\n2\taa\taaa\tNO\n");
  auto bad = run("corpus " + wrong);
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("mismatches 1"), std::string::npos);

  auto empty = temp_file("empty.tsv", "");
  auto e = run("corpus " + empty + " --format json");
  EXPECT_EQ(e.status, 0);
  auto j = nlohmann::json::parse(e.out);
  EXPECT_TRUE(j.at("entries").empty());

  auto malformed = temp_file("malformed.tsv", "2\ta\n2\ta\tabA\tYES\n");
  auto m = run("corpus " + malformed + " --format json");
  EXPECT_EQ(m.status, 0);
  auto jm = nlohmann::json::parse(m.out);
  ASSERT_EQ(jm.at("errors").size(), 1u);
  EXPECT_EQ(jm.at("errors")[0].at("line"), 1);
  EXPECT_EQ(jm.at("summary").at("records"), 1);
}

}  // namespace
