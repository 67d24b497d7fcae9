#include "securecam/multipart.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "securecam/error.hpp"

namespace securecam {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_part(std::string_view boundary, std::string_view content_type, ByteView body,
                        const HeaderList& extra) {
  std::string out;
  out.reserve(body.size() + 128);
  out.append("--").append(boundary).append("\r\n");
  out.append("Content-Type: ").append(content_type).append("\r\n");
  out.append("Content-Length: ").append(std::to_string(body.size())).append("\r\n");
  for (const auto& [name, value] : extra) out.append(name).append(": ").append(value).append("\r\n");
  out.append("\r\n");
  out.append(reinterpret_cast<const char*>(body.data()), body.size());
  out.append("\r\n");
  return out;
}

std::optional<std::string> boundary_from_content_type(std::string_view content_type) {
  const std::string lc = lower(content_type);
  const auto pos = lc.find("boundary=");
  if (pos == std::string::npos) return std::nullopt;
  std::string_view value = content_type.substr(pos + 9);
  value = value.substr(0, value.find(';'));
  value = trim(value);
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    value = value.substr(1, value.size() - 2);
  }
  if (value.empty()) return std::nullopt;
  return std::string(value);
}

const std::string* Part::header(std::string_view lower_name) const {
  const auto it = headers.find(std::string(lower_name));
  return it == headers.end() ? nullptr : &it->second;
}

MultipartReader::MultipartReader(std::string boundary, std::size_t max_part_bytes)
    : delimiter_("--" + boundary), max_part_bytes_(max_part_bytes) {}

void MultipartReader::feed(ByteView chunk, const std::function<void(Part&&)>& on_part) {
  buffer_.append(reinterpret_cast<const char*>(chunk.data()), chunk.size());

  for (;;) {
    const std::string_view pending = std::string_view(buffer_).substr(consumed_);
    if (state_ == State::SeekBoundary) {
      const auto pos = pending.find(delimiter_);
      if (pos == std::string_view::npos) {
        // Keep a tail that might be the start of a split delimiter.
        if (pending.size() > delimiter_.size()) consumed_ += pending.size() - delimiter_.size();
        break;
      }
      const auto eol = pending.find("\r\n", pos + delimiter_.size());
      if (eol == std::string_view::npos) break;
      consumed_ += eol + 2;
      current_ = Part{};
      state_ = State::Headers;
    } else if (state_ == State::Headers) {
      const auto end = pending.find("\r\n\r\n");
      if (end == std::string_view::npos) {
        if (pending.size() > 16 * 1024) throw Error(ErrorCode::MalformedStream, "part headers too long");
        break;
      }
      std::string_view block = pending.substr(0, end);
      while (!block.empty()) {
        const auto nl = block.find("\r\n");
        const std::string_view line = block.substr(0, nl);
        const auto colon = static_cast<std::size_t>(std::find(line.begin(), line.end(), ':') - line.begin());
        if (colon < line.size()) {
          current_.headers[lower(trim(line.substr(0, colon)))] = std::string(trim(line.substr(colon + 1)));
        }
        if (nl == std::string_view::npos) break;
        block.remove_prefix(nl + 2);
      }
      const std::string* len = current_.header("content-length");
      std::size_t n = 0;
      if (len == nullptr) throw Error(ErrorCode::MalformedStream, "part without Content-Length");
      const auto [ptr, ec] = std::from_chars(len->data(), len->data() + len->size(), n);
      if (ec != std::errc{} || ptr != len->data() + len->size()) {
        throw Error(ErrorCode::MalformedStream, "bad Content-Length '" + *len + "'");
      }
      if (n > max_part_bytes_) throw Error(ErrorCode::MalformedStream, "part exceeds size limit");
      body_len_ = n;
      consumed_ += end + 4;
      state_ = State::Body;
    } else {
      if (pending.size() < body_len_) break;
      current_.body.assign(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(body_len_));
      consumed_ += body_len_;
      state_ = State::SeekBoundary;
      on_part(std::move(current_));
      current_ = Part{};
    }
  }

  if (consumed_ > 0 && consumed_ >= buffer_.size() / 2) {
    buffer_.erase(0, consumed_);
    consumed_ = 0;
  }
}

}  // namespace securecam
