#pragma once

#include <stdexcept>
#include <string>

namespace pmplus {

enum class errc {
  length_exceeded,
  already_finalized,
  invalid_state,
  bad_magic,
  unsupported_version,
  key_out_of_range,
  out_of_range,
};

inline const char* to_string(errc e) {
  switch (e) {
    case errc::length_exceeded: return "LengthExceeded";
    case errc::already_finalized: return "AlreadyFinalized";
    case errc::invalid_state: return "InvalidState";
    case errc::bad_magic: return "BadMagic";
    case errc::unsupported_version: return "UnsupportedVersion";
    case errc::key_out_of_range: return "KeyOutOfRange";
    case errc::out_of_range: return "OutOfRange";
  }
  return "Unknown";
}

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

} // namespace pmplus
