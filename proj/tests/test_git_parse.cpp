#include <gtest/gtest.h>

#include "codeown/git_parse.hpp"

using namespace codeown;
using namespace codeown::gitparse;

TEST(Numstat, ParsesCountsAndBinaryMarker) {
  EXPECT_EQ(parse_numstat_line("12\t3\tsrc/A.java"), (NumstatEntry{"src/A.java", 12, 3, false}));
  EXPECT_EQ(parse_numstat_line("-\t-\tlogo.png"), (NumstatEntry{"logo.png", 0, 0, true}));
  EXPECT_EQ(parse_numstat_line("0\t0\tdir with space/S.java"), (NumstatEntry{"dir with space/S.java", 0, 0, false}));
}

TEST(Numstat, UnquotesCStylePaths) {
  EXPECT_EQ(parse_numstat_line("1\t0\t\"tab\\there.java\"").path, "tab\there.java");
  EXPECT_EQ(parse_numstat_line("1\t0\t\"caf\\303\\251.java\"").path, "caf\xc3\xa9.java");
  EXPECT_EQ(parse_numstat_line("1\t0\t\"q\\\"uote.java\"").path, "q\"uote.java");
}

TEST(Numstat, RejectsMalformedLines) {
  EXPECT_THROW(parse_numstat_line("12 3 A.java"), VcsError);
  EXPECT_THROW(parse_numstat_line("x\t3\tA.java"), VcsError);
  EXPECT_THROW(parse_numstat_line("1\t0\t\"bad\\q\""), VcsError);
}

// Captured from `git log --topo-order --reverse --diff-merges=first-parent
// --numstat --format=<kLogFormat>` on the merge fixture.
TEST(Log, ParsesRecordedOutput) {
  const std::string out =
      "\x1e" "5d00f797aab6a56c05532a6216266be58746b69d\x1f\x1f" "Ann\x1f" "ann@example.com\x1f" "1500003600\n"
      "\n"
      "20\t0\tM.java\n"
      "\x1e" "1c151d11371b0a5d5479050132a519ce3bde06d9\x1f" "5d00f797aab6a56c05532a6216266be58746b69d\x1f"
      "Ann\x1f" "ann@example.com\x1f" "1500010800\n"
      "\n"
      "3\t0\tN.java\n"
      "\x1e" "711f0d2eeebfc1eeea3cbe69f894535c05fdc807\x1f"
      "1c151d11371b0a5d5479050132a519ce3bde06d9 02592d21cafb6056daa1db5b4bb41263759f521b\x1f"
      "Carl\x1f" "carl@example.com\x1f" "1500014400\n"
      "\n"
      "5\t0\tM.java\n"
      "\x1e" "aaaa\x1f" "711f0d2eeebfc1eeea3cbe69f894535c05fdc807\x1f" "Nobody\x1f\x1f" "1500018000\n";
  auto commits = parse_log(out);
  ASSERT_EQ(commits.size(), 4u);
  EXPECT_TRUE(commits[0].parents.empty());
  EXPECT_EQ(commits[0].author_name, "Ann");
  EXPECT_EQ(commits[0].timestamp, 1500003600);
  ASSERT_EQ(commits[0].changes.size(), 1u);
  EXPECT_EQ(commits[0].changes[0].added, 20u);
  EXPECT_EQ(commits[2].parents.size(), 2u);
  EXPECT_EQ(commits[2].changes[0].path, "M.java");
  EXPECT_TRUE(commits[3].changes.empty());
  EXPECT_EQ(commits[3].author_email, "");
}

TEST(Log, EmptyOutputMeansNoCommits) { EXPECT_TRUE(parse_log("").empty()); }

TEST(Log, RejectsGarbage) {
  EXPECT_THROW(parse_log("1\t2\tA.java\n"), VcsError);
  EXPECT_THROW(parse_log("\x1e" "abc\x1f" "only-two\n"), VcsError);
}

// Line-porcelain output as produced by `git blame --line-porcelain`.
TEST(LinePorcelain, CountsEveryLineGroup) {
  const std::string out =
      "6624db85ed63e23cb81e6034adadc89401b37a81 1 1 2\n"
      "author Chris\n"
      "author-mail <chris@example.com>\n"
      "author-time 1500003600\n"
      "author-tz +0000\n"
      "committer Chris\n"
      "committer-mail <chris@example.com>\n"
      "committer-time 1500003600\n"
      "committer-tz +0000\n"
      "summary A: initial implementation\n"
      "boundary\n"
      "filename A.java\n"
      "\t    int chris_1 = 1;\n"
      "6624db85ed63e23cb81e6034adadc89401b37a81 2 2\n"
      "author Chris\n"
      "author-mail <chris@example.com>\n"
      "author-time 1500003600\n"
      "author-tz +0000\n"
      "committer Chris\n"
      "committer-mail <chris@example.com>\n"
      "committer-time 1500003600\n"
      "committer-tz +0000\n"
      "summary A: initial implementation\n"
      "boundary\n"
      "filename A.java\n"
      "\t\n"
      "639c17b0000000000000000000000000000000000 3 3 1\n"
      "author Pat\n"
      "author-mail <>\n"
      "author-time 1500007200\n"
      "author-tz +0000\n"
      "committer Pat\n"
      "committer-mail <pat@example.com>\n"
      "committer-time 1500007200\n"
      "committer-tz +0000\n"
      "summary A: small fix 1\n"
      "previous 6624db85ed63e23cb81e6034adadc89401b37a81 A.java\n"
      "filename A.java\n"
      "\tauthor Mallory\n";
  auto counts = parse_line_porcelain(out);
  EXPECT_EQ(counts.total_lines, 3u);
  EXPECT_EQ((counts.by_author.at({"Chris", "chris@example.com"})), 2u);
  // The content line "author Mallory" must not be read as a header.
  EXPECT_EQ((counts.by_author.at({"Pat", ""})), 1u);
  EXPECT_EQ(counts.by_author.size(), 2u);
}

TEST(LinePorcelain, EmptyFileHasNoLines) {
  auto counts = parse_line_porcelain("");
  EXPECT_EQ(counts.total_lines, 0u);
  EXPECT_TRUE(counts.by_author.empty());
}

TEST(LinePorcelain, RejectsTruncatedOutput) {
  EXPECT_THROW(parse_line_porcelain("6624db85 1 1 1\nauthor X\n"), VcsError);
  EXPECT_THROW(parse_line_porcelain("not-a-header\n"), VcsError);
}
