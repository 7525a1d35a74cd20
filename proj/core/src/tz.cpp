#include "polluterwatch/tz.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <vector>

#include "polluterwatch/errors.hpp"

namespace pw {

namespace {

// RFC 8536 field layout. All header/body integers are big-endian.
struct TzifHeader {
  char version = 0;
  std::uint32_t isutcnt = 0, isstdcnt = 0, leapcnt = 0;
  std::uint32_t timecnt = 0, typecnt = 0, charcnt = 0;
};

class Reader {
 public:
  Reader(const std::string& data, const std::string& name)
      : data_(data), name_(name) {}

  void require(std::size_t n) const {
    if (pos_ + n > data_.size())
      throw ConfigError("timezone '" + name_ + "': truncated zone file");
  }

  std::uint8_t u8() {
    require(1);
    return std::uint8_t(data_[pos_++]);
  }

  std::uint32_t u32() {
    require(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | std::uint8_t(data_[pos_++]);
    return v;
  }

  std::int32_t i32() { return std::int32_t(u32()); }

  std::int64_t i64() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | std::uint8_t(data_[pos_++]);
    return std::int64_t(v);
  }

  void skip(std::size_t n) {
    require(n);
    pos_ += n;
  }

  TzifHeader header() {
    require(44);
    if (std::memcmp(data_.data() + pos_, "TZif", 4) != 0)
      throw ConfigError("timezone '" + name_ + "': not a TZif file");
    TzifHeader h;
    h.version = data_[pos_ + 4];
    pos_ += 20;  // magic + version + 15 reserved bytes
    h.isutcnt = u32();
    h.isstdcnt = u32();
    h.leapcnt = u32();
    h.timecnt = u32();
    h.typecnt = u32();
    h.charcnt = u32();
    if (h.typecnt == 0)
      throw ConfigError("timezone '" + name_ + "': zone file has no types");
    return h;
  }

 private:
  const std::string& data_;
  const std::string& name_;
  std::size_t pos_ = 0;
};

std::string zoneinfo_dir() {
  if (const char* env = std::getenv("TZDIR"); env && *env) return env;
  return "/usr/share/zoneinfo";
}

bool valid_zone_name(const std::string& name) {
  if (name.empty() || name.front() == '/' || name.find("..") != std::string::npos)
    return false;
  return name.find_first_not_of(
             "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"
             "0123456789/_+-") == std::string::npos;
}

}  // namespace

TimeZone TimeZone::load(const std::string& iana_name) {
  if (!valid_zone_name(iana_name))
    throw ConfigError("invalid timezone identifier '" + iana_name + "'");

  std::ifstream file(zoneinfo_dir() + "/" + iana_name, std::ios::binary);
  if (!file)
    throw ConfigError("unknown timezone '" + iana_name +
                      "' (not in the zoneinfo database)");
  std::string data((std::istreambuf_iterator<char>(file)),
                   std::istreambuf_iterator<char>());

  Reader reader(data, iana_name);
  TzifHeader h = reader.header();
  bool wide = false;
  if (h.version >= '2') {
    // Skip the 32-bit v1 block; the 64-bit block that follows supersedes it.
    reader.skip(std::size_t(h.timecnt) * 5 + std::size_t(h.typecnt) * 6 +
                h.charcnt + std::size_t(h.leapcnt) * 8 + h.isstdcnt + h.isutcnt);
    h = reader.header();
    wide = true;
  }

  TimeZone tz;
  tz.name_ = iana_name;
  tz.transitions_.reserve(h.timecnt);
  for (std::uint32_t i = 0; i < h.timecnt; ++i)
    tz.transitions_.push_back(wide ? reader.i64() : reader.i32());
  std::vector<std::uint8_t> type_index(h.timecnt);
  for (std::uint32_t i = 0; i < h.timecnt; ++i) type_index[i] = reader.u8();

  struct TypeInfo {
    std::int32_t utoff;
    bool isdst;
  };
  std::vector<TypeInfo> types(h.typecnt);
  for (std::uint32_t i = 0; i < h.typecnt; ++i) {
    types[i].utoff = reader.i32();
    types[i].isdst = reader.u8() != 0;
    reader.u8();  // designation index, unused
  }

  tz.offsets_.reserve(h.timecnt);
  for (std::uint32_t i = 0; i < h.timecnt; ++i) {
    if (type_index[i] >= types.size())
      throw ConfigError("timezone '" + iana_name + "': corrupt type index");
    tz.offsets_.push_back(types[type_index[i]].utoff);
  }

  // Before the first transition: the first standard-time type, per common
  // practice; beyond the last transition the last type keeps applying (the
  // footer TZ string is not evaluated).
  tz.first_offset_ = types[0].utoff;
  for (const auto& t : types) {
    if (!t.isdst) {
      tz.first_offset_ = t.utoff;
      break;
    }
  }
  return tz;
}

std::int32_t TimeZone::utc_offset_at(UnixSeconds t) const {
  auto it = std::upper_bound(transitions_.begin(), transitions_.end(), t);
  if (it == transitions_.begin()) return first_offset_;
  return offsets_[std::size_t(it - transitions_.begin()) - 1];
}

}  // namespace pw
