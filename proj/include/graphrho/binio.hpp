#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace graphrho::binio {

inline uint64_t fnv1a(const char* data, size_t n, uint64_t h = 1469598103934665603ULL) {
  for (size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ULL;
  }
  return h;
}

template <typename T>
void put(std::string& buf, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  char tmp[sizeof(T)];
  std::memcpy(tmp, &v, sizeof(T));
  buf.append(tmp, sizeof(T));
}

inline void put_str(std::string& buf, const std::string& s) {
  put<uint32_t>(buf, static_cast<uint32_t>(s.size()));
  buf.append(s);
}

template <typename T>
T take(const std::string& buf, size_t& pos) {
  static_assert(std::is_trivially_copyable_v<T>);
  if (pos + sizeof(T) > buf.size()) throw std::runtime_error("load error: truncated stream");
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

inline std::string take_str(const std::string& buf, size_t& pos) {
  auto len = take<uint32_t>(buf, pos);
  if (pos + len > buf.size()) throw std::runtime_error("load error: truncated stream");
  std::string s(buf, pos, len);
  pos += len;
  return s;
}

// Container framing: magic (8 bytes), u64 payload size, payload, u64 FNV-1a
// of the payload. Throws on truncation or checksum mismatch.
inline void write_framed(std::ostream& out, const char magic[8], const std::string& payload) {
  out.write(magic, 8);
  uint64_t size = payload.size();
  out.write(reinterpret_cast<const char*>(&size), sizeof(size));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  uint64_t checksum = fnv1a(payload.data(), payload.size());
  out.write(reinterpret_cast<const char*>(&checksum), sizeof(checksum));
  if (!out) throw std::runtime_error("save error: stream failure");
}

inline std::string read_framed(std::istream& in, const char magic[8], const char* what) {
  char m[8];
  in.read(m, sizeof(m));
  if (!in || std::memcmp(m, magic, sizeof(m)) != 0)
    throw std::runtime_error(std::string(what) + " load error: bad magic");
  uint64_t size = 0;
  in.read(reinterpret_cast<char*>(&size), sizeof(size));
  if (!in) throw std::runtime_error(std::string(what) + " load error: truncated stream");
  std::string payload(size, '\0');
  in.read(payload.data(), static_cast<std::streamsize>(size));
  if (!in || static_cast<uint64_t>(in.gcount()) != size)
    throw std::runtime_error(std::string(what) + " load error: truncated stream");
  uint64_t checksum = 0;
  in.read(reinterpret_cast<char*>(&checksum), sizeof(checksum));
  if (!in) throw std::runtime_error(std::string(what) + " load error: truncated stream");
  if (checksum != fnv1a(payload.data(), payload.size()))
    throw std::runtime_error(std::string(what) + " load error: checksum mismatch");
  return payload;
}

}  // namespace graphrho::binio
