#include <gtest/gtest.h>

#include <set>

#include "qpc/bits.hpp"
#include "qpc/protocol.hpp"

using namespace qpc;

TEST(BitString, HexIsMostSignificantFirstAndPadded) {
  EXPECT_EQ(BitString::from_hex("BEEF", 16).to_binary(), "1011111011101111");
  EXPECT_EQ(BitString::from_hex("0x5", 6).to_binary(), "000101");
  EXPECT_EQ(BitString::from_hex("0", 3).to_binary(), "000");
  EXPECT_EQ(BitString::from_hex("00F", 4).to_binary(), "1111");
}

TEST(BitString, HexOverflowRejected) {
  EXPECT_THROW(BitString::from_hex("1F", 4), std::invalid_argument);
  EXPECT_THROW(BitString::from_hex("8", 3), std::invalid_argument);
  EXPECT_THROW(BitString::from_hex("zz", 8), std::invalid_argument);
  EXPECT_THROW(BitString::from_hex("", 8), std::invalid_argument);
}

TEST(BitString, HexRoundTrip) {
  Rng rng(3);
  for (std::size_t len : {1u, 4u, 7u, 16u, 33u}) {
    const auto b = BitString::random(len, rng);
    EXPECT_EQ(BitString::from_hex(b.to_hex(), len), b);
  }
}

TEST(BitString, Integer) {
  EXPECT_EQ(BitString::from_integer(5, 4).to_binary(), "0101");
  EXPECT_EQ(BitString::from_integer(0xFF, 3).to_binary(), "111");
}

TEST(BitString, XorAndComplement) {
  const auto a = BitString::from_binary("1100");
  const auto b = BitString::from_binary("1010");
  EXPECT_EQ((a ^ b).to_binary(), "0110");
  EXPECT_EQ(a.complement().to_binary(), "0011");
  EXPECT_EQ((a ^ b).ones(), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ((a ^ a).all_zero(), true);
  EXPECT_EQ(a.popcount(), 2u);
}

TEST(BitString, XorLengthMismatchThrows) {
  EXPECT_THROW(BitString::from_binary("10") ^ BitString::from_binary("101"), ProtocolError);
}

TEST(BitString, BinaryRejectsOtherCharacters) { EXPECT_THROW(BitString::from_binary("102"), std::invalid_argument); }

TEST(IdealKey, DeterministicPerSeed) {
  Rng a(11), b(11), c(12);
  const auto ka = ideal_key(64, a);
  EXPECT_EQ(ka, ideal_key(64, b));
  EXPECT_NE(ka, ideal_key(64, c));
  EXPECT_EQ(ka.size(), 64u);
}

TEST(Rng, ChooseIsSortedDistinctSubset) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto s = rng.choose(20, 7);
    ASSERT_EQ(s.size(), 7u);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 7u);
    EXPECT_LT(s.back(), 20u);
  }
  EXPECT_THROW(rng.choose(3, 4), std::invalid_argument);
}

TEST(Rng, BelowIsUniform) {
  Rng rng(9);
  std::array<int, 6> counts{};
  for (int i = 0; i < 60000; ++i) counts[rng.below(6)]++;
  for (int c : counts) EXPECT_NEAR(c / 60000.0, 1.0 / 6, 0.01);
}

TEST(RunContext, StreamsAreIndependentOfDrawOrder) {
  RunContext x(42), y(42);
  for (int i = 0; i < 100; ++i) x.stream(Stream::Eavesdropper).next();
  EXPECT_EQ(x.stream(Stream::Alice).next(), y.stream(Stream::Alice).next());
  EXPECT_NE(x.derive(1).seed(), x.derive(2).seed());
  EXPECT_EQ(x.derive(1).seed(), y.derive(1).seed());
}

TEST(Outcome, FromResult) {
  EXPECT_TRUE(ComparisonOutcome::from_result(BitString(5)).is_equal());
  const auto u = ComparisonOutcome::from_result(BitString::from_binary("0010"));
  ASSERT_TRUE(u.is_unequal());
  EXPECT_EQ(u.unequal().positions, (std::vector<std::size_t>{2}));
  EXPECT_EQ(u.summary(), "unequal at 2");
}

TEST(Transcript, JsonlRoundTrip) {
  ProtocolTranscript t;
  t.record(Stage::Osb1, Party::ThirdParty, EventKind::Prepare, "8 pairs", 16);
  t.record(Stage::Osb6, Party::Alice, EventKind::Announce, "C_A=0101 \"quoted\"", 0, 4);
  t.record(Stage::Osb8, Party::ThirdParty, EventKind::Verdict, "equal", 0, 1);
  const auto back = ProtocolTranscript::from_jsonl(t.to_jsonl());
  EXPECT_EQ(back.events(), t.events());
  EXPECT_EQ(t.qubits_prepared(), 16u);
  EXPECT_EQ(t.decoding_bits(), 5u);
  EXPECT_EQ(t.announcement(Stage::Osb6, Party::Alice).value(), "C_A=0101 \"quoted\"");
  EXPECT_FALSE(t.announcement(Stage::Osb6, Party::Bob).has_value());
}

TEST(Transcript, CsvHasHeaderAndOneLinePerEvent) {
  ProtocolTranscript t;
  t.record(Stage::Sq1, Party::ThirdParty, EventKind::Prepare, "x,y", 4);
  t.record(Stage::Sq9, Party::ThirdParty, EventKind::Verdict, "equal", 0, 1);
  const auto csv = t.to_csv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Tags, RoundTrip) {
  for (auto s : {Stage::Osb1, Stage::Osb8, Stage::Sq1, Stage::Sq9}) EXPECT_EQ(stage_from_string(to_string(s)), s);
  for (auto p : {Protocol::Osb, Protocol::Sqpc}) EXPECT_EQ(protocol_from_string(to_string(p)), p);
  EXPECT_THROW(protocol_from_string("bb84"), std::invalid_argument);
}
