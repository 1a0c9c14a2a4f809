#include "tagstream.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <queue>
#include <sstream>

namespace bp {

namespace {

constexpr char kMagic[4] = {'B', 'P', 'L', '1'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 16;
constexpr std::size_t kRecordBytes = 9;

void put_u16(char* p, std::uint16_t v) {
  p[0] = static_cast<char>(v & 0xff);
  p[1] = static_cast<char>((v >> 8) & 0xff);
}

void put_u64(char* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

TagStream::TagStream(std::vector<TimeTag> tags) : tags_(std::move(tags)) {
  std::stable_sort(tags_.begin(), tags_.end(),
                   [](const TimeTag& a, const TimeTag& b) {
                     return a.time_ps != b.time_ps ? a.time_ps < b.time_ps
                                                   : a.channel < b.channel;
                   });
}

TagStream TagStream::unchecked(std::vector<TimeTag> tags) {
  TagStream s;
  s.tags_ = std::move(tags);
  return s;
}

std::vector<std::uint64_t> TagStream::channel_times(std::uint8_t channel) const {
  std::vector<std::uint64_t> out;
  for (const TimeTag& t : tags_)
    if (t.channel == channel) out.push_back(t.time_ps);
  return out;
}

std::size_t TagStream::channel_count(std::uint8_t channel) const {
  std::size_t n = 0;
  for (const TimeTag& t : tags_) n += (t.channel == channel);
  return n;
}

std::uint64_t write_stream(const TagStream& stream, std::ostream& sink) {
  std::array<char, kHeaderBytes> header{};
  std::memcpy(header.data(), kMagic, 4);
  put_u16(header.data() + 4, kVersion);
  put_u16(header.data() + 6, 0);
  put_u64(header.data() + 8, stream.size());
  sink.write(header.data(), header.size());

  std::array<char, kRecordBytes> rec{};
  for (const TimeTag& t : stream.tags()) {
    rec[0] = static_cast<char>(t.channel);
    put_u64(rec.data() + 1, t.time_ps);
    sink.write(rec.data(), rec.size());
  }
  if (!sink) throw std::runtime_error("write_stream: sink write failed");
  return kHeaderBytes + kRecordBytes * stream.size();
}

std::uint64_t write_stream_file(const TagStream& stream, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_stream: cannot open " + path);
  return write_stream(stream, f);
}

TagStream read_stream(std::istream& source) {
  std::array<unsigned char, kHeaderBytes> header{};
  source.read(reinterpret_cast<char*>(header.data()), header.size());
  if (source.gcount() != static_cast<std::streamsize>(kHeaderBytes))
    throw ParseError("tag stream: truncated header");
  if (std::memcmp(header.data(), kMagic, 4) != 0)
    throw ParseError("tag stream: bad magic");
  const std::uint16_t version = get_u16(header.data() + 4);
  if (version != kVersion)
    throw ParseError("tag stream: unsupported version " + std::to_string(version));
  const std::uint64_t count = get_u64(header.data() + 8);

  std::vector<TimeTag> tags;
  tags.reserve(count);
  std::array<unsigned char, kRecordBytes> rec{};
  for (std::uint64_t i = 0; i < count; ++i) {
    source.read(reinterpret_cast<char*>(rec.data()), rec.size());
    if (source.gcount() != static_cast<std::streamsize>(kRecordBytes))
      throw ParseError("tag stream: truncated record " + std::to_string(i));
    tags.push_back({rec[0], get_u64(rec.data() + 1)});
  }
  return TagStream::unchecked(std::move(tags));
}

TagStream read_stream_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_stream: cannot open " + path);
  return read_stream(f);
}

TagStream merge_sorted(const std::vector<TagStream>& streams) {
  struct Head {
    std::uint64_t time;
    std::uint8_t channel;
    std::size_t input;
    std::size_t pos;
  };
  auto later = [](const Head& a, const Head& b) {
    if (a.time != b.time) return a.time > b.time;
    if (a.channel != b.channel) return a.channel > b.channel;
    return a.input > b.input;
  };
  std::priority_queue<Head, std::vector<Head>, decltype(later)> heads(later);
  std::size_t total = 0;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    total += streams[i].size();
    if (!streams[i].empty()) {
      const TimeTag& t = streams[i].tags().front();
      heads.push({t.time_ps, t.channel, i, 0});
    }
  }
  std::vector<TimeTag> out;
  out.reserve(total);
  while (!heads.empty()) {
    Head h = heads.top();
    heads.pop();
    out.push_back(streams[h.input].tags()[h.pos]);
    if (h.pos + 1 < streams[h.input].size()) {
      const TimeTag& t = streams[h.input].tags()[h.pos + 1];
      heads.push({t.time_ps, t.channel, h.input, h.pos + 1});
    }
  }
  return TagStream::unchecked(std::move(out));
}

TagStream import_csv(std::istream& source) {
  std::vector<TimeTag> tags;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(source, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.find("channel") != std::string::npos) continue;
    std::istringstream row(line);
    std::string ch_str, ts_str;
    if (!std::getline(row, ch_str, ',') || !std::getline(row, ts_str))
      throw ParseError("csv import: malformed line " + std::to_string(lineno));
    try {
      const unsigned long ch = std::stoul(ch_str);
      if (ch > 255) throw std::out_of_range("channel");
      tags.push_back({static_cast<std::uint8_t>(ch), std::stoull(ts_str)});
    } catch (const std::exception&) {
      throw ParseError("csv import: bad value on line " + std::to_string(lineno));
    }
  }
  return TagStream(std::move(tags));
}

TagStream import_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("import_csv: cannot open " + path);
  return import_csv(f);
}

}  // namespace bp
