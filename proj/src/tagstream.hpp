#ifndef BP_TAGSTREAM_HPP
#define BP_TAGSTREAM_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace bp {

struct TimeTag {
  std::uint8_t channel;
  std::uint64_t time_ps;

  friend bool operator==(const TimeTag&, const TimeTag&) = default;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time-sorted sequence of detection events, 1 ps resolution. Tags are kept
// globally ordered by (time, channel); within one channel timestamps are
// therefore nondecreasing.
class TagStream {
 public:
  TagStream() = default;
  explicit TagStream(std::vector<TimeTag> tags);  // sorts

  // Adopts tags in their given order (readers preserve file order exactly).
  static TagStream unchecked(std::vector<TimeTag> tags);

  const std::vector<TimeTag>& tags() const { return tags_; }
  std::size_t size() const { return tags_.size(); }
  bool empty() const { return tags_.empty(); }

  // Timestamps of one channel, in order.
  std::vector<std::uint64_t> channel_times(std::uint8_t channel) const;
  std::size_t channel_count(std::uint8_t channel) const;

 private:
  std::vector<TimeTag> tags_;
};

// .bpl v1: magic "BPL1", u16 version=1, u16 reserved=0, u64 record count,
// then 9-byte records (u8 channel, u64 little-endian picoseconds).
std::uint64_t write_stream(const TagStream& stream, std::ostream& sink);
std::uint64_t write_stream_file(const TagStream& stream, const std::string& path);

TagStream read_stream(std::istream& source);       // throws ParseError
TagStream read_stream_file(const std::string& path);

// Stable k-way merge; ties broken by (timestamp, channel, input index).
TagStream merge_sorted(const std::vector<TagStream>& streams);

// "channel,timestamp_ps" rows, optional header line.
TagStream import_csv(std::istream& source);
TagStream import_csv_file(const std::string& path);

}  // namespace bp

#endif
