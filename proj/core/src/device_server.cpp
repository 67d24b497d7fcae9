#include "securecam/device_server.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "http_util.hpp"
#include "securecam/broadcast.hpp"
#include "securecam/error.hpp"
#include "securecam/key_config.hpp"
#include "securecam/multipart.hpp"

namespace securecam {
namespace {

constexpr const char* kPlaceholderIndex = R"html(<!doctype html>
<html>
<head><meta charset="utf-8"><title>SecureCam</title></head>
<body>
<h1>SecureCam device</h1>
<p>Frames leave this device encrypted. Point a viewer relay at
<code>/stream</code> to watch them.</p>
<button onclick="capturePhoto()">Capture</button>
<form onsubmit="return setControl(this)">
  <select name="var">
    <option>framesize</option><option>quality</option><option>brightness</option>
    <option>contrast</option><option>fps_limit</option>
  </select>
  <input name="val" type="number" value="5">
  <button type="submit">Set</button>
</form>
<pre id="status"></pre>
<script>
function capturePhoto() {
  var xhr = new XMLHttpRequest();
  xhr.open('GET', "/capture", true);
  xhr.send();
}
function setControl(f) {
  fetch('/control?var=' + f.var.value + '&val=' + f.val.value);
  return false;
}
setInterval(function () {
  fetch('/status').then(r => r.text()).then(t => {
    document.getElementById('status').textContent = t;
  });
}, 1000);
</script>
</body>
</html>
)html";

struct StreamItem {
  std::uint32_t seq = 0;
  std::string part;    // complete multipart part, written in one piece
  std::string record;  // SFRM bytes; empty for plaintext baseline items
};

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

struct DeviceServer::Impl {
  explicit Impl(DeviceOptions opts)
      : options(std::move(opts)),
        source(options.frames_dir ? FrameSource::directory(*options.frames_dir)
                                  : FrameSource::generator(options.seed)),
        settings(options.settings) {}

  DeviceOptions options;
  FrameSource source;
  FramePacer pacer;

  mutable std::mutex settings_mutex;
  CameraSettings settings;

  CaptureFlag capture_flag;
  mutable std::mutex still_mutex;
  std::shared_ptr<const StreamItem> latest_still;

  LatestBroadcast<StreamItem> frames;
  StreamStatsTracker stats;

  httplib::Server http;
  int bound_port = -1;
  std::atomic<bool> running{false};
  std::jthread capture_thread;
  std::thread http_thread;

  CameraSettings settings_snapshot() const {
    std::lock_guard lock(settings_mutex);
    return settings;
  }

  void capture_loop(std::stop_token stop);
  void install_routes();
  std::string status_json() const;
};

void DeviceServer::Impl::capture_loop(std::stop_token stop) {
  while (!stop.stop_requested()) {
    if (!pacer.wait(settings_snapshot().fps_limit, stop)) break;
    Frame frame;
    try {
      frame = source.next_frame(settings_snapshot());
    } catch (const Error& e) {
      std::fprintf(stderr, "capture failed: %s\n", e.what());
      continue;
    }

    auto item = std::make_shared<StreamItem>();
    item->seq = frame.seq;
    const HeaderList seq_header = {{"X-Frame-Seq", std::to_string(frame.seq)}};
    const auto t0 = std::chrono::steady_clock::now();
    if (options.encrypt) {
      const auto enc = seal_frame(frame, options.key, frame.seq);
      const auto t1 = std::chrono::steady_clock::now();
      stats.record_capture(std::chrono::duration<double, std::micro>(t1 - t0).count(), t1);
      const Bytes wire = encode_wire(enc);
      item->record.assign(wire.begin(), wire.end());
      item->part = format_part(kStreamBoundary, "application/octet-stream", wire, seq_header);
    } else {
      stats.record_capture(0.0);
      item->part = format_part(kStreamBoundary, "image/jpeg", frame.jpeg, seq_header);
    }

    if (capture_flag.consume() && options.encrypt) {
      std::lock_guard lock(still_mutex);
      latest_still = item;
    }
    frames.publish(std::move(item));
  }
}

std::string DeviceServer::Impl::status_json() const {
  const auto s = settings_snapshot();
  const auto st = stats.snapshot();
  const auto res = resolution_for(s.framesize);
  bool has_still = false;
  {
    std::lock_guard lock(still_mutex);
    has_still = latest_still != nullptr;
  }
  nlohmann::json j = {
      {"settings",
       {{"framesize", s.framesize},
        {"quality", s.quality},
        {"brightness", s.brightness},
        {"contrast", s.contrast},
        {"fps_limit", s.fps_limit},
        {"resolution", std::to_string(res.width) + "x" + std::to_string(res.height)}}},
      {"mode", options.encrypt ? std::string(to_string(options.key.mode)) : "none"},
      {"key_id", options.key.key_id},
      {"capture_pending", capture_flag.pending()},
      {"has_still", has_still},
      {"stats",
       {{"fps", st.fps},
        {"bytes_per_s", st.bytes_per_s},
        {"encrypt_latency_us",
         {{"p50", st.encrypt_latency_us.p50},
          {"p95", st.encrypt_latency_us.p95},
          {"p99", st.encrypt_latency_us.p99}}},
        {"frames_sent", st.frames_sent},
        {"frames_captured", st.frames_captured}}},
  };
  return j.dump();
}

void DeviceServer::Impl::install_routes() {
  http.set_socket_options(detail::exclusive_bind_options);
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

  std::string index = kPlaceholderIndex;
  if (options.ui_dir) {
    const auto page = *options.ui_dir / "index.html";
    if (std::filesystem::is_regular_file(page)) index = read_text_file(page);
    http.set_mount_point("/ui", options.ui_dir->string());
  }
  http.Get("/", [index](const httplib::Request&, httplib::Response& res) {
    res.set_content(index, "text/html");
  });

  http.Get("/capture", [this](const httplib::Request&, httplib::Response& res) {
    capture_flag.request();
    res.set_content("Taking Photo", "text/plain");
  });

  http.Get("/saved-photo", [this](const httplib::Request&, httplib::Response& res) {
    std::shared_ptr<const StreamItem> still;
    {
      std::lock_guard lock(still_mutex);
      still = latest_still;
    }
    if (!still) {
      res.status = 404;
      res.set_content("no photo taken yet", "text/plain");
      return;
    }
    res.set_content(still->record, "application/octet-stream");
  });

  http.Get("/stream", [this](const httplib::Request&, httplib::Response& res) {
    auto seen = std::make_shared<std::uint64_t>(frames.version());
    res.set_chunked_content_provider(
        "multipart/x-mixed-replace; boundary=" + std::string(kStreamBoundary),
        [this, seen](std::size_t, httplib::DataSink& sink) {
          while (running.load()) {
            auto item = frames.wait_next(*seen, std::chrono::milliseconds(250));
            if (!item) {
              if (!sink.is_writable()) return false;
              continue;
            }
            if (!sink.write(item->part.data(), item->part.size())) return false;
            stats.record_sent(item->part.size());
            return true;
          }
          return false;
        });
  });

  http.Get("/control", [this](const httplib::Request& req, httplib::Response& res) {
    const auto fail = [&res](const std::string& why) {
      res.status = 400;
      res.set_content(why, "text/plain");
    };
    if (!req.has_param("var") || !req.has_param("val")) return fail("expected var and val");
    const std::string var = req.get_param_value("var");
    const std::string raw = req.get_param_value("val");
    int val = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), val);
    if (raw.empty() || ec != std::errc{} || ptr != raw.data() + raw.size()) {
      return fail("val is not an integer: '" + raw + "'");
    }
    try {
      std::lock_guard lock(settings_mutex);
      settings = apply_control(settings, var, val);
    } catch (const Error& e) {
      return fail(e.what());
    }
    res.status = 200;
  });

  http.Get("/status", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(status_json(), "application/json");
  });
}

DeviceServer::DeviceServer(DeviceOptions options) {
  require_mode_allowed(options.key.mode, options.allow_ecb);
  CipherContext::expand_key(options.key.key);
  validate(options.settings);
  impl_ = std::make_unique<Impl>(std::move(options));
  if (impl_->source.is_directory() && impl_->source.file_count() == 0) {
    throw Error(ErrorCode::SourceExhausted, "frame directory has no *.jpg files");
  }
  impl_->http.new_task_queue = [n = impl_->options.worker_threads] {
    return new httplib::ThreadPool(static_cast<std::size_t>(n));
  };
  impl_->install_routes();
}

DeviceServer::~DeviceServer() { stop(); }

void DeviceServer::start() {
  if (impl_->running.exchange(true)) return;
  auto& impl = *impl_;
  impl.bound_port = impl.options.port == 0
                        ? impl.http.bind_to_any_port(impl.options.bind)
                        : (impl.http.bind_to_port(impl.options.bind, impl.options.port)
                               ? impl.options.port
                               : -1);
  if (impl.bound_port < 0) {
    impl.running = false;
    throw Error(ErrorCode::IoFailure, "cannot bind " + impl.options.bind + ":" +
                                          std::to_string(impl.options.port));
  }
  impl.capture_thread = std::jthread([&impl](std::stop_token st) { impl.capture_loop(st); });
  impl.http_thread = std::thread([&impl] { impl.http.listen_after_bind(); });
  impl.http.wait_until_ready();
}

void DeviceServer::stop() {
  if (!impl_ || !impl_->running.exchange(false)) return;
  auto& impl = *impl_;
  impl.capture_thread.request_stop();
  impl.pacer.interrupt();
  if (impl.capture_thread.joinable()) impl.capture_thread.join();
  impl.frames.close();
  impl.http.stop();
  if (impl.http_thread.joinable()) impl.http_thread.join();
}

int DeviceServer::port() const { return impl_->bound_port; }

std::string DeviceServer::base_url() const {
  return "http://" + impl_->options.bind + ":" + std::to_string(impl_->bound_port);
}

CameraSettings DeviceServer::settings() const { return impl_->settings_snapshot(); }
bool DeviceServer::capture_pending() const { return impl_->capture_flag.pending(); }
StreamStats DeviceServer::stats() const { return impl_->stats.snapshot(); }
std::string DeviceServer::status_json() const { return impl_->status_json(); }

std::variant<DeviceOptions, int> parse_device_cli(const std::vector<std::string>& args,
                                                  std::ostream& out, std::ostream& err) {
  CLI::App app{"SecureCam device simulator: serves encrypted JPEG frames over HTTP"};
  DeviceOptions opts;
  std::string mode_name;
  std::optional<std::filesystem::path> key_file;
  std::string frames_dir;
  std::string ui_dir;
  int fps = opts.settings.fps_limit;
  int framesize = opts.settings.framesize;

  app.add_option("--bind", opts.bind, "Bind address")->capture_default_str();
  app.add_option("--port", opts.port, "Listen port (0 = ephemeral)")->capture_default_str();
  app.add_option("--mode", mode_name, "Cipher mode: ctr (default), cbc, ecb (needs --allow-ecb)");
  app.add_option("--key-file", key_file, "Key file (key_id=.. mode=.. key=<hex> lines)");
  app.add_option("--frames-dir", frames_dir, "Cycle *.jpg files from this directory");
  app.add_option("--seed", opts.seed, "Generator seed")->capture_default_str();
  app.add_option("--fps", fps, "Frame rate limit (1..30)")->capture_default_str();
  app.add_option("--framesize", framesize, "Frame size class (0..10)")->capture_default_str();
  app.add_flag("--allow-ecb", opts.allow_ecb, "Permit the insecure ECB mode");
  app.add_option("--ui-dir", ui_dir, "Directory with index.html for the control panel");

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

  try {
    opts.key = resolve_keys(key_file).primary();
    if (!mode_name.empty()) {
      const auto mode = parse_mode(mode_name);
      if (!mode) throw Error(ErrorCode::BadConfig, "unknown mode '" + mode_name + "'");
      opts.key.mode = *mode;
    }
    require_mode_allowed(opts.key.mode, opts.allow_ecb);
    opts.settings = apply_control(opts.settings, "fps_limit", fps);
    opts.settings = apply_control(opts.settings, "framesize", framesize);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
  if (!frames_dir.empty()) opts.frames_dir = frames_dir;
  if (!ui_dir.empty()) opts.ui_dir = ui_dir;
  return opts;
}

}  // namespace securecam
