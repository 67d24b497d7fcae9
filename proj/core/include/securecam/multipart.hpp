#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "securecam/bytes.hpp"

namespace securecam {

inline constexpr std::string_view kStreamBoundary = "secureframe";

using HeaderList = std::vector<std::pair<std::string, std::string>>;

/// One complete multipart/x-mixed-replace part:
///
///     --<boundary>\r\n
///     Content-Type: <type>\r\n
///     Content-Length: <n>\r\n
///     <extra headers>\r\n
///     \r\n
///     <n body bytes>\r\n
std::string format_part(std::string_view boundary, std::string_view content_type, ByteView body,
                        const HeaderList& extra = {});

/// Extracts boundary=... from a multipart Content-Type value.
std::optional<std::string> boundary_from_content_type(std::string_view content_type);

struct Part {
  std::map<std::string, std::string> headers;  // names lower-cased
  Bytes body;

  const std::string* header(std::string_view lower_name) const;
};

/// Incremental parser for Content-Length delimited parts. Bytes between
/// parts (preamble, CRLFs) are skipped while searching for the next
/// boundary line. Throws Error(MalformedStream) for a part without a usable
/// Content-Length or one larger than max_part_bytes.
class MultipartReader {
 public:
  explicit MultipartReader(std::string boundary, std::size_t max_part_bytes = 64 << 20);

  void feed(ByteView chunk, const std::function<void(Part&&)>& on_part);

  /// Bytes held for an incomplete part.
  std::size_t buffered() const noexcept { return buffer_.size() - consumed_; }

 private:
  enum class State { SeekBoundary, Headers, Body };

  std::string delimiter_;
  std::size_t max_part_bytes_;
  std::string buffer_;
  std::size_t consumed_ = 0;
  State state_ = State::SeekBoundary;
  Part current_;
  std::size_t body_len_ = 0;
};

}  // namespace securecam
