#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "rng.hpp"
#include "tagstream.hpp"

using namespace bp;

namespace {

std::string to_bytes(const TagStream& stream) {
  std::ostringstream out(std::ios::binary);
  write_stream(stream, out);
  return out.str();
}

TagStream random_stream(std::uint64_t seed, std::size_t n) {
  const CounterRng rng(seed);
  std::vector<TimeTag> tags(n);
  for (std::size_t i = 0; i < n; ++i)
    tags[i] = {static_cast<std::uint8_t>(rng.raw(0, i, 0) % 6),
               rng.raw(0, i, 1) % 1000000000ULL};
  return TagStream(std::move(tags));
}

}  // namespace

TEST_CASE("empty stream is a 16-byte file") {
  const std::string bytes = to_bytes(TagStream{});
  REQUIRE(bytes.size() == 16);
  CHECK(bytes.substr(0, 4) == "BPL1");
  CHECK(bytes[4] == 1);  // version, little endian
  CHECK(bytes[5] == 0);
  for (std::size_t i = 6; i < 16; ++i) CHECK(bytes[i] == 0);
}

TEST_CASE("single tag record layout") {
  const TagStream stream(std::vector<TimeTag>{{3, 42}});
  const std::string bytes = to_bytes(stream);
  REQUIRE(bytes.size() == 25);
  const unsigned char expected[9] = {0x03, 0x2A, 0, 0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < 9; ++i)
    CHECK(static_cast<unsigned char>(bytes[16 + i]) == expected[i]);
  // count field
  CHECK(bytes[8] == 1);
}

TEST_CASE("round trip is the identity on a large random stream") {
  const TagStream stream = random_stream(11, 1000000);
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  const std::uint64_t bytes = write_stream(stream, buf);
  CHECK(bytes == 16 + 9 * stream.size());
  const TagStream back = read_stream(buf);
  CHECK(back.tags() == stream.tags());

  // second trip is byte-identical
  std::ostringstream again(std::ios::binary);
  write_stream(back, again);
  CHECK(again.str() == buf.str());
}

TEST_CASE("parser rejects corruption") {
  const TagStream stream = random_stream(12, 3);
  std::string bytes = to_bytes(stream);

  SUBCASE("bad magic") {
    for (std::size_t i = 0; i < 4; ++i) {
      std::string mutated = bytes;
      mutated[i] ^= 0x01;
      std::istringstream in(mutated, std::ios::binary);
      CHECK_THROWS_AS(read_stream(in), ParseError);
    }
  }
  SUBCASE("version mismatch") {
    bytes[4] = 2;
    std::istringstream in(bytes, std::ios::binary);
    CHECK_THROWS_AS(read_stream(in), ParseError);
  }
  SUBCASE("truncated tail") {
    for (std::size_t cut : {bytes.size() - 1, bytes.size() - 5, std::size_t{20},
                            std::size_t{15}, std::size_t{3}}) {
      std::istringstream in(bytes.substr(0, cut), std::ios::binary);
      CHECK_THROWS_AS(read_stream(in), ParseError);
    }
  }
}

TEST_CASE("merge") {
  SUBCASE("merge of one stream is itself") {
    const TagStream stream = random_stream(13, 5000);
    CHECK(merge_sorted({stream}).tags() == stream.tags());
  }
  SUBCASE("disjoint ranges concatenate") {
    const TagStream early(std::vector<TimeTag>{{0, 10}, {1, 20}, {0, 30}});
    const TagStream late(std::vector<TimeTag>{{1, 100}, {0, 200}});
    const TagStream merged = merge_sorted({early, late});
    REQUIRE(merged.size() == 5);
    CHECK(merged.tags()[0].time_ps == 10);
    CHECK(merged.tags()[4].time_ps == 200);
  }
  SUBCASE("merge equals sort of concatenation") {
    std::vector<TagStream> inputs;
    std::vector<TimeTag> all;
    for (std::uint64_t s = 0; s < 4; ++s) {
      inputs.push_back(random_stream(100 + s, 25000));
      const auto& tags = inputs.back().tags();
      all.insert(all.end(), tags.begin(), tags.end());
    }
    const TagStream merged = merge_sorted(inputs);
    std::stable_sort(all.begin(), all.end(),
                     [](const TimeTag& a, const TimeTag& b) {
                       return a.time_ps != b.time_ps ? a.time_ps < b.time_ps
                                                     : a.channel < b.channel;
                     });
    REQUIRE(merged.size() == all.size());
    // same multiset ordered by (time, channel); input index only breaks
    // exact (time, channel) ties, which the comparison sort leaves stable
    CHECK(merged.tags() == all);
  }
}

TEST_CASE("csv import") {
  std::istringstream in("channel,timestamp_ps\n1,100\n0,50\n1,150\n");
  const TagStream stream = import_csv(in);
  REQUIRE(stream.size() == 3);
  CHECK(stream.tags()[0] == TimeTag{0, 50});  // import sorts
  CHECK(stream.tags()[2] == TimeTag{1, 150});

  std::istringstream headerless("2,7\n");
  CHECK(import_csv(headerless).size() == 1);

  std::istringstream bad("1\n");
  CHECK_THROWS_AS(import_csv(bad), ParseError);
  std::istringstream bad2("1,abc\n");
  CHECK_THROWS_AS(import_csv(bad2), ParseError);
  std::istringstream bad3("300,5\n");
  CHECK_THROWS_AS(import_csv(bad3), ParseError);
}

TEST_CASE("channel extraction") {
  const TagStream stream(std::vector<TimeTag>{{0, 5}, {1, 3}, {0, 9}, {2, 1}});
  CHECK(stream.channel_times(0) == std::vector<std::uint64_t>{5, 9});
  CHECK(stream.channel_count(1) == 1);
  CHECK(stream.channel_times(7).empty());
}
