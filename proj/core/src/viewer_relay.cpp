#include "securecam/viewer_relay.hpp"

#include <charconv>
#include <exception>
#include <fstream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "http_util.hpp"
#include "securecam/broadcast.hpp"
#include "securecam/error.hpp"
#include "securecam/jpeg.hpp"
#include "securecam/multipart.hpp"
#include "securecam/secure_stream.hpp"

namespace securecam {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::string_view kRelayBoundary = "frame";

std::string content_type_base(const std::string* value) {
  if (value == nullptr) return {};
  std::string base = value->substr(0, value->find(';'));
  while (!base.empty() && base.back() == ' ') base.pop_back();
  return base;
}

Bytes open_with_ring(ByteView record, const KeyRing& keys) {
  const EncryptedFrame enc = decode_wire(record);
  const KeyConfig* key = keys.find(enc.key_id);
  if (key == nullptr) {
    throw Error(ErrorCode::KeyMismatch, "no key with id " + std::to_string(enc.key_id));
  }
  return open_frame(enc, *key);
}

// Per-run bookkeeping shared by every connection attempt.
class Consumer {
 public:
  Consumer(const RelayOptions& options, FrameSink& sink)
      : options_(options), sink_(sink), start_(Clock::now()) {}

  bool done() const { return !report_.ended_by.empty(); }

  void check_limits() {
    if (done()) return;
    if (options_.count && report_.parts_consumed >= *options_.count) {
      report_.ended_by = "count";
    } else if (options_.duration && Clock::now() - start_ >= *options_.duration) {
      report_.ended_by = "duration";
    }
  }

  void on_part(Part&& part) {
    if (done()) return;
    ++report_.parts_consumed;
    const std::string type = content_type_base(part.header("content-type"));
    std::optional<std::uint32_t> seq;
    try {
      Bytes jpeg;
      const auto t0 = Clock::now();
      if (type == "application/octet-stream") {
        const EncryptedFrame enc = decode_wire(part.body);
        seq = enc.seq;
        const KeyConfig* key = options_.keys.find(enc.key_id);
        if (key == nullptr) {
          throw Error(ErrorCode::KeyMismatch, "no key with id " + std::to_string(enc.key_id));
        }
        jpeg = open_frame(enc, *key);
      } else if (type == "image/jpeg" && options_.accept_plaintext) {
        if (const auto* h = part.header("x-frame-seq")) {
          std::uint32_t s = 0;
          if (std::from_chars(h->data(), h->data() + h->size(), s).ec == std::errc{}) seq = s;
        }
        if (!jpeg::has_magic(part.body)) throw Error(ErrorCode::CorruptImage, "plaintext part");
        jpeg = std::move(part.body);
      } else {
        track_seq(seq);
        reject(type == "image/jpeg" ? "UnexpectedPlaintext" : "UnknownPartType");
        return;
      }
      const auto t1 = Clock::now();
      track_seq(seq);
      latencies_.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
      sink_.emit(seq.value_or(0), jpeg);
      ++report_.frames_ok;
      report_.bytes_ok += jpeg.size();
      if (!first_ok_) first_ok_ = t1;
      last_ok_ = t1;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoFailure) throw;
      track_seq(seq);
      reject(std::string(to_string(e.code())));
    }
    check_limits();
  }

  RelayReport finish() {
    const auto end = Clock::now();
    report_.duration_s = std::chrono::duration<double>(end - start_).count();
    report_.decrypt_latency_us = percentiles(std::move(latencies_));
    if (report_.duration_s > 0) {
      report_.throughput_bytes_per_s = static_cast<double>(report_.bytes_ok) / report_.duration_s;
    }
    if (report_.frames_ok >= 2 && first_ok_ && last_ok_ && *last_ok_ > *first_ok_) {
      report_.achieved_fps = static_cast<double>(report_.frames_ok - 1) /
                             std::chrono::duration<double>(*last_ok_ - *first_ok_).count();
    }
    return report_;
  }

  RelayReport& report() { return report_; }
  Clock::time_point start() const { return start_; }

 private:
  void reject(const std::string& cause) {
    ++report_.frames_rejected;
    ++report_.rejected_by_cause[cause];
  }

  void track_seq(std::optional<std::uint32_t> seq) {
    if (!seq) return;
    if (report_.last_seq) {
      if (*seq != *report_.last_seq + 1) ++report_.seq_gaps;
      if (*seq <= *report_.last_seq) report_.seq_strictly_increasing = false;
    } else {
      report_.first_seq = *seq;
    }
    report_.last_seq = *seq;
  }

  const RelayOptions& options_;
  FrameSink& sink_;
  Clock::time_point start_;
  RelayReport report_;
  std::vector<double> latencies_;
  std::optional<Clock::time_point> first_ok_;
  std::optional<Clock::time_point> last_ok_;
};

}  // namespace

ParsedUrl parse_http_url(std::string_view url) {
  constexpr std::string_view scheme = "http://";
  if (url.substr(0, scheme.size()) != scheme) {
    throw Error(ErrorCode::BadConfig, "only http:// URLs are supported: " + std::string(url));
  }
  std::string_view rest = url.substr(scheme.size());
  ParsedUrl out;
  const auto slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) out.path = std::string(rest.substr(slash));
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    const std::string_view port = authority.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), out.port);
    if (ec != std::errc{} || ptr != port.data() + port.size() || out.port <= 0 || out.port > 65535) {
      throw Error(ErrorCode::BadConfig, "bad port in URL: " + std::string(url));
    }
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) throw Error(ErrorCode::BadConfig, "missing host in URL: " + std::string(url));
  out.host = std::string(authority);
  return out;
}

std::string report_to_json(const RelayReport& r) {
  nlohmann::json j = {
      {"parts_consumed", r.parts_consumed},
      {"frames_ok", r.frames_ok},
      {"frames_rejected", r.frames_rejected},
      {"rejected_by_cause", r.rejected_by_cause},
      {"seq_gaps", r.seq_gaps},
      {"seq_strictly_increasing", r.seq_strictly_increasing},
      {"first_seq", r.first_seq ? nlohmann::json(*r.first_seq) : nlohmann::json()},
      {"last_seq", r.last_seq ? nlohmann::json(*r.last_seq) : nlohmann::json()},
      {"decrypt_latency_us",
       {{"p50", r.decrypt_latency_us.p50},
        {"p95", r.decrypt_latency_us.p95},
        {"p99", r.decrypt_latency_us.p99}}},
      {"bytes_ok", r.bytes_ok},
      {"throughput_bytes_per_s", r.throughput_bytes_per_s},
      {"achieved_fps", r.achieved_fps},
      {"duration_s", r.duration_s},
      {"ended_by", r.ended_by},
      {"transport_error", r.transport_error ? nlohmann::json(*r.transport_error) : nlohmann::json()},
  };
  return j.dump(2);
}

RelayReport consume_stream(const RelayOptions& options, FrameSink& sink) {
  const ParsedUrl url = parse_http_url(options.url);
  Consumer consumer(options, sink);
  consumer.check_limits();
  if ((options.count && *options.count == 0) ||
      (options.duration && options.duration->count() <= 0)) {
    return consumer.finish();
  }

  int attempts_left = options.reconnect_attempts;
  while (!consumer.done()) {
    httplib::Client client(url.host, url.port);
    client.set_connection_timeout(std::chrono::seconds(2));
    client.set_read_timeout(options.read_timeout);

    std::optional<MultipartReader> reader;
    std::optional<std::string> protocol_error;
    std::exception_ptr sink_failure;

    const auto result = client.Get(
        url.path,
        [&](const httplib::Response& resp) {
          if (resp.status != 200) {
            protocol_error = "HTTP status " + std::to_string(resp.status);
            return false;
          }
          const auto boundary = boundary_from_content_type(resp.get_header_value("Content-Type"));
          if (!boundary) {
            protocol_error = "response is not multipart: " + resp.get_header_value("Content-Type");
            return false;
          }
          reader.emplace(*boundary);
          return true;
        },
        [&](const char* data, std::size_t len) {
          try {
            reader->feed(ByteView(reinterpret_cast<const std::uint8_t*>(data), len),
                         [&](Part&& p) { consumer.on_part(std::move(p)); });
          } catch (const Error& e) {
            if (e.code() == ErrorCode::IoFailure) {
              sink_failure = std::current_exception();
            } else {
              protocol_error = e.what();
            }
            return false;
          }
          consumer.check_limits();
          return !consumer.done();
        });

    if (sink_failure) std::rethrow_exception(sink_failure);
    if (consumer.done()) break;
    if (protocol_error) {
      consumer.report().transport_error = *protocol_error;
      consumer.report().ended_by = "error";
      break;
    }
    consumer.check_limits();
    if (consumer.done()) break;

    const bool never_connected =
        !result && result.error() == httplib::Error::Connection && consumer.report().parts_consumed == 0;
    if (attempts_left > 0) {
      --attempts_left;
      std::this_thread::sleep_for(options.reconnect_delay);
      continue;
    }
    if (never_connected) {
      consumer.report().transport_error =
          std::string(to_string(ErrorCode::ConnectFailed)) + ": " + httplib::to_string(result.error());
      consumer.report().ended_by = "error";
    } else if (consumer.report().parts_consumed == 0 && !result) {
      consumer.report().transport_error = httplib::to_string(result.error());
      consumer.report().ended_by = "error";
    } else {
      consumer.report().ended_by = "disconnect";
    }
  }
  return consumer.finish();
}

DirSink::DirSink(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir_.string() + ": " + ec.message());
}

void DirSink::emit(std::uint32_t seq, ByteView jpeg) {
  const auto path = dir_ / ("frame_" + std::to_string(seq) + ".jpg");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(jpeg.data()), static_cast<std::streamsize>(jpeg.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
}

struct MjpegSink::Impl {
  std::string device_base_url;
  KeyRing keys;
  httplib::Server http;
  std::thread thread;
  int port = -1;
  std::atomic<bool> running{true};
  LatestBroadcast<std::string> parts;
  std::mutex latest_mutex;
  std::shared_ptr<const Bytes> latest;
};

MjpegSink::MjpegSink(std::string host, int port, std::string device_base_url, KeyRing keys)
    : impl_(std::make_unique<Impl>()) {
  auto& impl = *impl_;
  impl.device_base_url = std::move(device_base_url);
  impl.keys = std::move(keys);
  impl.http.set_socket_options(detail::exclusive_bind_options);
  impl.http.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

  impl.http.Get("/stream", [&impl](const httplib::Request&, httplib::Response& res) {
    auto seen = std::make_shared<std::uint64_t>(0);
    res.set_chunked_content_provider(
        "multipart/x-mixed-replace; boundary=" + std::string(kRelayBoundary),
        [&impl, seen](std::size_t, httplib::DataSink& sink) {
          while (impl.running.load()) {
            auto part = impl.parts.wait_next(*seen, std::chrono::milliseconds(250));
            if (!part) {
              if (!sink.is_writable()) return false;
              continue;
            }
            return sink.write(part->data(), part->size());
          }
          return false;
        });
  });

  impl.http.Get("/latest", [&impl](const httplib::Request&, httplib::Response& res) {
    std::shared_ptr<const Bytes> frame;
    {
      std::lock_guard lock(impl.latest_mutex);
      frame = impl.latest;
    }
    if (!frame) {
      res.status = 404;
      return;
    }
    res.set_content(reinterpret_cast<const char*>(frame->data()), frame->size(), "image/jpeg");
  });

  impl.http.Get("/still", [&impl](const httplib::Request&, httplib::Response& res) {
    if (impl.device_base_url.empty()) {
      res.status = 404;
      return;
    }
    httplib::Client device(impl.device_base_url);
    device.set_connection_timeout(std::chrono::seconds(2));
    auto got = device.Get("/saved-photo");
    if (!got) {
      res.status = 502;
      res.set_content("device unreachable", "text/plain");
      return;
    }
    if (got->status != 200) {
      res.status = got->status;
      res.set_content(got->body, "text/plain");
      return;
    }
    try {
      const Bytes jpeg = open_with_ring(as_bytes(got->body), impl.keys);
      res.set_content(reinterpret_cast<const char*>(jpeg.data()), jpeg.size(), "image/jpeg");
    } catch (const Error& e) {
      res.status = 502;
      res.set_content(e.what(), "text/plain");
    }
  });

  impl.port = port == 0 ? impl.http.bind_to_any_port(host)
                        : (impl.http.bind_to_port(host, port) ? port : -1);
  if (impl.port < 0) {
    throw Error(ErrorCode::IoFailure, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl.thread = std::thread([&impl] { impl.http.listen_after_bind(); });
  impl.http.wait_until_ready();
}

MjpegSink::~MjpegSink() {
  impl_->running = false;
  impl_->parts.close();
  impl_->http.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void MjpegSink::emit(std::uint32_t seq, ByteView jpeg) {
  auto frame = std::make_shared<const Bytes>(jpeg.begin(), jpeg.end());
  {
    std::lock_guard lock(impl_->latest_mutex);
    impl_->latest = frame;
  }
  impl_->parts.publish(std::make_shared<const std::string>(
      format_part(kRelayBoundary, "image/jpeg", jpeg, {{"X-Frame-Seq", std::to_string(seq)}})));
}

int MjpegSink::port() const { return impl_->port; }

int run_relay_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SecureCam viewer relay: decrypts the device stream"};
  std::string url = "http://127.0.0.1:8032/stream";
  std::optional<std::filesystem::path> key_file;
  std::string sink_kind = "null";
  std::string out_dir = "frames";
  int listen_port = 8081;
  std::optional<std::uint64_t> count;
  std::optional<double> duration_s;
  std::string report_path;
  int reconnects = 0;

  app.add_option("--url", url, "Device stream URL")->capture_default_str();
  app.add_option("--key-file", key_file, "Key file (falls back to SECURECAM_KEY)");
  app.add_option("--sink", sink_kind, "null, dir or mjpeg")
      ->check(CLI::IsMember({"null", "dir", "mjpeg"}))
      ->capture_default_str();
  app.add_option("--out-dir", out_dir, "Output directory for the dir sink")->capture_default_str();
  app.add_option("--listen-port", listen_port, "Localhost port for the mjpeg sink")
      ->capture_default_str();
  app.add_option("--count", count, "Stop after this many parts");
  app.add_option("--duration", duration_s, "Stop after this many seconds")->check(CLI::NonNegativeNumber);
  app.add_option("--report-json", report_path, "Write the report as JSON to this path");
  app.add_option("--reconnect", reconnects, "Reconnect attempts after a dropped stream")
      ->capture_default_str();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  RelayOptions opts;
  opts.url = url;
  opts.count = count;
  opts.reconnect_attempts = reconnects;
  if (duration_s) {
    opts.duration = std::chrono::milliseconds(static_cast<std::int64_t>(*duration_s * 1000.0));
  }
  std::string device_base;
  try {
    opts.keys = resolve_keys(key_file);
    const auto parsed = parse_http_url(url);
    device_base = "http://" + parsed.host + ":" + std::to_string(parsed.port);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }

  RelayReport report;
  try {
    std::unique_ptr<FrameSink> sink;
    if (sink_kind == "dir") {
      sink = std::make_unique<DirSink>(out_dir);
    } else if (sink_kind == "mjpeg") {
      auto mjpeg = std::make_unique<MjpegSink>("127.0.0.1", listen_port, device_base, opts.keys);
      out << "serving plaintext MJPEG on http://127.0.0.1:" << mjpeg->port() << "/stream\n";
      sink = std::move(mjpeg);
    } else {
      sink = std::make_unique<NullSink>();
    }
    report = consume_stream(opts, *sink);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }

  out << "frames ok " << report.frames_ok << ", rejected " << report.frames_rejected
      << ", seq gaps " << report.seq_gaps << ", fps " << report.achieved_fps
      << ", decrypt p50/p95/p99 us " << report.decrypt_latency_us.p50 << "/"
      << report.decrypt_latency_us.p95 << "/" << report.decrypt_latency_us.p99 << ", ended by "
      << report.ended_by << "\n";
  if (report.transport_error) err << "transport error: " << *report.transport_error << "\n";

  if (!report_path.empty()) {
    std::ofstream f(report_path);
    f << report_to_json(report) << "\n";
    if (!f) {
      err << "cannot write " << report_path << "\n";
      return 1;
    }
  }
  return report.frames_rejected == 0 && !report.transport_error ? 0 : 1;
}

}  // namespace securecam
