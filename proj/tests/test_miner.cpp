#include <gtest/gtest.h>

#include <algorithm>

#include "codeown/miner.hpp"
#include "codeown/snapshot.hpp"
#include "support.hpp"

using namespace codeown;
using codeown::testing::fixture_repo;
using codeown::testing::window;

namespace {

std::map<std::string, int> commits_by_author(const std::vector<CommitRecord>& commits) {
  std::map<std::string, int> out;
  for (const auto& c : commits) ++out[c.author.key];
  return out;
}

}  // namespace

TEST(EnumerateReleaseCommits, Scenario1FirstRelease) {
  auto commits = enumerate_release_commits(fixture_repo("scenario1"), window("", "r1"));
  ASSERT_EQ(commits.size(), 4u);
  EXPECT_EQ(commits_by_author(commits),
            (std::map<std::string, int>{{"chris@example.com", 1}, {"pat@example.com", 3}}));
  // Oldest first.
  EXPECT_EQ(commits.front().author.key, "chris@example.com");
  EXPECT_TRUE(std::is_sorted(commits.begin(), commits.end(),
                             [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; }));
  EXPECT_EQ(commits.front().file_changes, (std::vector<FileChange>{{"A.java", 84, 0, false}}));
}

TEST(EnumerateReleaseCommits, Scenario3SecondRelease) {
  auto commits = enumerate_release_commits(fixture_repo("scenario3"), window("r1", "r2"));
  ASSERT_EQ(commits.size(), 1u);
  EXPECT_EQ(commits[0].author.key, "linda@example.com");
  EXPECT_EQ(commits[0].file_changes, (std::vector<FileChange>{{"C.java", 5, 5, false}}));
}

TEST(EnumerateReleaseCommits, EmptyRangeWhenPredecessorIsRelease) {
  EXPECT_TRUE(enumerate_release_commits(fixture_repo("scenario3"), window("r2", "r2")).empty());
}

TEST(EnumerateReleaseCommits, MergeCommitsAreFlagged) {
  auto commits = enumerate_release_commits(fixture_repo("merge"), window("r0", "r1"));
  ASSERT_EQ(commits.size(), 3u);
  auto merges = std::count_if(commits.begin(), commits.end(), [](const auto& c) { return c.is_merge; });
  EXPECT_EQ(merges, 1);
  const auto& merge = *std::find_if(commits.begin(), commits.end(), [](const auto& c) { return c.is_merge; });
  EXPECT_EQ(merge.author.key, "carl@example.com");
  // First-parent diff of the merge brings in the feature branch change.
  EXPECT_EQ(merge.file_changes, (std::vector<FileChange>{{"M.java", 5, 0, false}}));
}

TEST(EnumerateReleaseCommits, HashesAreUnique) {
  auto commits = enumerate_release_commits(fixture_repo("combined"), window("", "r2"));
  std::set<std::string> hashes;
  for (const auto& c : commits) EXPECT_TRUE(hashes.insert(c.hash).second);
  EXPECT_EQ(commits.size(), 10u);
}

TEST(EnumerateReleaseCommits, UnresolvableRefIsAConfigError) {
  try {
    enumerate_release_commits(fixture_repo("scenario1"), window("", "no-such-tag"));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("no-such-tag"), std::string::npos);
  }
}

TEST(EnumerateReleaseCommits, UnreadableRepoIsAVcsError) {
  EXPECT_THROW(enumerate_release_commits("/nonexistent/repo", window("", "r1")), VcsError);
  auto plain = codeown::testing::fresh_dir("not-a-repo");
  EXPECT_THROW(enumerate_release_commits(plain, window("", "r1")), VcsError);
}

TEST(BlameReleaseFiles, Scenario1) {
  auto files = blame_release_files(fixture_repo("scenario1"), "r1", {".java"});
  ASSERT_EQ(files.size(), 1u);
  const auto& a = files.at("A.java");
  EXPECT_EQ(a.total_lines, 90u);
  EXPECT_EQ(a.author_line_counts,
            (std::map<std::string, std::uint64_t>{{"chris@example.com", 84}, {"pat@example.com", 6}}));
}

TEST(BlameReleaseFiles, Scenario2OverwrittenAuthorDisappears) {
  auto files = blame_release_files(fixture_repo("scenario2"), "r1", {".java"});
  const auto& b = files.at("B.java");
  EXPECT_EQ(b.total_lines, 10u);
  EXPECT_EQ(b.author_line_counts, (std::map<std::string, std::uint64_t>{{"bob@example.com", 10}}));
}

TEST(BlameReleaseFiles, MixedContent) {
  Diagnostics diag;
  auto files = blame_release_files(fixture_repo("mixed"), "r1", {".java"}, {}, &diag);
  EXPECT_EQ(files.size(), 3u);
  EXPECT_FALSE(files.count("blob.java"));
  EXPECT_FALSE(files.count("notes.txt"));
  ASSERT_TRUE(files.count("Empty.java"));
  EXPECT_EQ(files.at("Empty.java").total_lines, 0u);
  EXPECT_TRUE(files.at("Empty.java").author_line_counts.empty());
  EXPECT_EQ(files.at("dir with space/S.java").total_lines, 2u);
  ASSERT_EQ(diag.messages.size(), 1u);
  EXPECT_NE(diag.messages[0].find("blob.java"), std::string::npos);
}

TEST(BlameReleaseFiles, EmptyFilterIsRejected) {
  EXPECT_THROW(blame_release_files(fixture_repo("scenario1"), "r1", {}), ConfigError);
}

TEST(BlameReleaseFiles, ParallelMatchesSequential) {
  auto repo = fixture_repo("combined");
  auto seq = blame_release_files(repo, "r2", {".java"}, {}, nullptr, 1);
  auto par = blame_release_files(repo, "r2", {".java"}, {}, nullptr, 4);
  EXPECT_EQ(seq, par);
  for (const auto& [path, la] : seq) {
    std::uint64_t sum = 0;
    for (const auto& [k, n] : la.author_line_counts) sum += n;
    EXPECT_EQ(sum, la.total_lines) << path;
  }
}

TEST(BuildSnapshot, Scenario3SecondRelease) {
  auto snap = build_snapshot(fixture_repo("scenario3"), window("r1", "r2"), MinerConfig{});
  ASSERT_EQ(snap.commits.size(), 1u);
  EXPECT_EQ(snap.commits[0].author.key, "linda@example.com");
  EXPECT_EQ(snap.file_authorship.at("C.java").author_line_counts,
            (std::map<std::string, std::uint64_t>{{"linda@example.com", 5}, {"mary@example.com", 95}}));
  EXPECT_EQ(snap.window.release_name, "r2");
  EXPECT_EQ(snap.release_commit.size(), 40u);
}

TEST(BuildSnapshot, NoFilteredFilesGivesValidEmptySnapshot) {
  MinerConfig cfg;
  cfg.extensions = {".cpp"};
  auto snap = build_snapshot(fixture_repo("scenario1"), window("", "r1"), cfg);
  EXPECT_TRUE(snap.file_authorship.empty());
  EXPECT_EQ(snap.commits.size(), 4u);
  for (const auto& c : snap.commits) EXPECT_TRUE(c.file_changes.empty());
  EXPECT_EQ(parse_snapshot(serialize_snapshot(snap)), snap);
}

TEST(BuildSnapshot, AliasesApplyToCommitsAndBlame) {
  MinerConfig cfg;
  auto plain = build_snapshot(fixture_repo("aliases"), window("", "r1"), cfg);
  EXPECT_EQ(plain.file_authorship.at("D.java").author_line_counts.size(), 2u);

  cfg.aliases = AliasMap({{"dana@home.example.com", "dana@work.example.com"}});
  auto merged = build_snapshot(fixture_repo("aliases"), window("", "r1"), cfg);
  EXPECT_EQ(merged.file_authorship.at("D.java").author_line_counts,
            (std::map<std::string, std::uint64_t>{{"dana@work.example.com", 10}}));
  for (const auto& c : merged.commits) EXPECT_EQ(c.author.key, "dana@work.example.com");
  EXPECT_EQ(merged.alias_entries.size(), 1u);
}

TEST(BuildSnapshot, CommitPathsAtReleaseAreBlamed) {
  auto snap = build_snapshot(fixture_repo("combined"), window("", "r2"), MinerConfig{});
  for (const auto& c : snap.commits)
    for (const auto& fc : c.file_changes) EXPECT_TRUE(snap.file_authorship.count(fc.path)) << fc.path;
}

TEST(BuildSnapshot, SerializationIsByteDeterministic) {
  auto repo = fixture_repo("combined");
  auto a = serialize_snapshot(build_snapshot(repo, window("r1", "r2", "2.0"), MinerConfig{}));
  auto b = serialize_snapshot(build_snapshot(repo, window("r1", "r2", "2.0"), MinerConfig{}));
  EXPECT_EQ(a, b);
  // Keys sorted, top level exactly the documented four.
  auto j = nlohmann::json::parse(a);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"commits", "config", "file_authorship", "window"}));
  EXPECT_EQ(serialize_snapshot(parse_snapshot(a)), a);
}

TEST(Snapshot, LoadRejectsInconsistentLineCounts) {
  auto snap = build_snapshot(fixture_repo("scenario1"), window("", "r1"), MinerConfig{});
  auto j = snapshot_to_json(snap);
  j["file_authorship"]["A.java"]["total_lines"] = 91;
  EXPECT_THROW(snapshot_from_json(j), ConfigError);
  EXPECT_THROW(parse_snapshot("{not json"), ConfigError);
  EXPECT_THROW(load_snapshot("/nonexistent/x.snapshot.json"), ConfigError);
}
