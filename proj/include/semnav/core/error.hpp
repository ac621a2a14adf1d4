#pragma once

#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace semnav {

/** Base error type for every contract violation in the library. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/** Malformed or truncated file content. Carries a byte offset when known. */
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, long offset = -1)
      : Error(offset >= 0 ? msg + " (at byte " + std::to_string(offset) + ")" : msg),
        offset_(offset) {}
  long offset() const { return offset_; }

 private:
  long offset_;
};

#if defined(__GNUC__)
__attribute__((format(printf, 1, 2)))
#endif
inline std::string
format_msg(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return std::string(buf);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

}  // namespace semnav
