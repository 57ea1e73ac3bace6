#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "softslides/convergence.hpp"
#include "softslides/deck.hpp"
#include "softslides/framing.hpp"
#include "softslides/session.hpp"
#include "softslides/trace.hpp"
#include "softslides/transport.hpp"

namespace {

enum Exit : int { kOk = 0, kConfig = 2, kMismatch = 3, kNumericFault = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string load_deck_text(const std::string& path) {
  if (path.empty()) return std::string(slides::default_deck_text());
  try {
    return slides::read_deck_text(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("cannot write '" + path + "'");
}

std::optional<std::string> scene_fault(const slides::protocol::Session& session) {
  const auto& scene = session.presentation().current().scene;
  return scene ? scene->fault : std::nullopt;
}

struct RunArgs {
  std::string deck;
  std::string slide = "0";
  std::uint64_t ticks = 0;
  std::string out;
};

int cmd_run(const RunArgs& a) {
  const std::string deck_text = load_deck_text(a.deck);
  auto session = slides::harness::open_session(deck_text, a.slide);
  slides::harness::TraceRecorder recorder(slides::harness::describe(session, slides::deck_hash(deck_text)));
  recorder.frame(session.snapshot());
  for (std::uint64_t i = 0; i < a.ticks; ++i) recorder.frame(session.advance());
  write_file(a.out, recorder.bytes());
  if (const auto fault = scene_fault(session)) {
    std::cerr << "softslides: simulation fault: " << *fault << '\n';
    return kNumericFault;
  }
  return kOk;
}

struct VerifyArgs {
  std::string trace;
  std::string deck;
};

int cmd_verify(const VerifyArgs& a) {
  const std::string deck_text = load_deck_text(a.deck);
  const std::string trace = read_file(a.trace);
  const auto result = slides::harness::verify_trace(trace, deck_text);
  if (result.ok) {
    std::cout << result.message << '\n';
    return kOk;
  }
  std::cerr << "softslides: trace diverges at tick " << *result.divergent_tick << ": " << result.message << '\n';
  return kMismatch;
}

struct CompareArgs {
  std::string system;
  std::string grid = "h=1/60,1/120,1/240";
  std::vector<std::string> integrators{"euler", "midpoint", "feynman", "rk4"};
  double horizon = 2.0;
  std::string out;
};

int cmd_compare(const CompareArgs& a) {
  const auto system = softbody::parse_system(a.system);
  if (!system) throw ConfigError("unknown system '" + a.system + "' (expected oscillator or freefall)");
  std::vector<double> grid;
  try {
    grid = softbody::parse_step_grid(a.grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--grid: ") + e.what());
  }
  std::vector<softbody::IntegratorKind> kinds;
  for (const auto& name : a.integrators) {
    const auto kind = softbody::parse_integrator(name);
    if (!kind) throw ConfigError("unknown integrator '" + name + "'");
    kinds.push_back(*kind);
  }
  if (!(a.horizon > 0.0)) throw ConfigError("--horizon must be positive");

  const auto rows = softbody::compare_integrators(*system, grid, kinds, {}, a.horizon);
  const std::string csv = softbody::error_table_csv(rows);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    write_file(a.out, csv);
  }
  return kOk;
}

struct ServeArgs {
  std::string deck;
  std::string slide = "0";
  std::string host = "127.0.0.1";
  std::uint16_t port = 7341;
  bool stdio = false;
  std::optional<std::uint64_t> ticks;
  double tick_ms = 1000.0 / 60.0;
  std::string record;
};

int cmd_serve(const ServeArgs& a) {
  namespace proto = slides::protocol;
  const std::string deck_text = load_deck_text(a.deck);
  auto session = slides::harness::open_session(deck_text, a.slide);

  std::optional<slides::harness::TraceRecorder> recorder;
  proto::ServeOptions options;
  options.tick_period = std::chrono::microseconds(static_cast<std::int64_t>(a.tick_ms * 1000.0));
  options.max_ticks = a.ticks;
  if (!a.record.empty()) {
    recorder.emplace(slides::harness::describe(session, slides::deck_hash(deck_text)));
    options.record = [&](const proto::Message& m) { recorder->record(m); };
  }

  proto::ServeSummary summary;
  if (a.stdio) {
    proto::FdStream stream(0, 1);
    summary = proto::serve(session, stream, options);
  } else {
    const proto::Socket listener = proto::listen_tcp(a.host, a.port);
    std::cerr << "softslides: listening on " << a.host << ':' << proto::local_port(listener) << '\n';
    const proto::Socket client = proto::accept_client(listener);
    proto::FdStream stream(client.fd(), client.fd());
    summary = proto::serve(session, stream, options);
  }
  std::cerr << "softslides: served " << summary.frames << " frames, " << summary.commands << " commands ("
            << summary.errors << " rejected)\n";
  if (recorder) write_file(a.record, recorder->bytes());
  if (summary.end == proto::ServeEnd::FramingBroken) {
    std::cerr << "softslides: client sent malformed framing\n";
    return kConfig;
  }
  return kOk;
}

int cmd_list(const std::string& deck) {
  const auto p = slides::build_presentation(slides::parse_deck(load_deck_text(deck)));
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& s = p.slides()[i];
    std::cout << i << '\t' << s.id << '\t' << (s.initial_scene ? "sim" : "text") << '\t' << s.title << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGPIPE, SIG_IGN);

  CLI::App app{"softslides: softbody slide decks, traces and integrator comparisons"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one slide headless and write a trace");
  run_cmd->add_option("--deck", run.deck, "Deck file (default: built-in deck)");
  run_cmd->add_option("--slide", run.slide, "Slide id or 0-based index")->capture_default_str();
  run_cmd->add_option("--ticks", run.ticks, "Ticks to simulate after the initial frame")->required();
  run_cmd->add_option("--out", run.out, "Trace file to write")->required();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Re-simulate a trace and compare it byte for byte");
  verify_cmd->add_option("--trace", verify.trace, "Trace file")->required();
  verify_cmd->add_option("--deck", verify.deck, "Deck file (default: built-in deck)");

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare-integrators", "Error table against an analytic solution");
  compare_cmd->add_option("--system", compare.system, "oscillator or freefall")->required();
  compare_cmd->add_option("--grid", compare.grid, "Step sizes, e.g. h=1/60,1/120,1/240")->capture_default_str();
  compare_cmd->add_option("--integrators", compare.integrators, "Subset of euler midpoint feynman rk4")
      ->delimiter(',');
  compare_cmd->add_option("--horizon", compare.horizon, "Simulated seconds")->capture_default_str();
  compare_cmd->add_option("--out", compare.out, "CSV file (default: standard output)");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Drive a deck for one front end over the frame protocol");
  serve_cmd->add_option("--deck", serve.deck, "Deck file (default: built-in deck)");
  serve_cmd->add_option("--slide", serve.slide, "Starting slide id or index")->capture_default_str();
  serve_cmd->add_option("--host", serve.host)->capture_default_str();
  auto* port_opt = serve_cmd->add_option("--port", serve.port, "TCP port (0 picks one)")->capture_default_str();
  serve_cmd->add_flag("--stdio", serve.stdio, "Speak the protocol on stdin/stdout")->excludes(port_opt);
  serve_cmd->add_option("--ticks", serve.ticks, "Stop after this many ticks");
  serve_cmd->add_option("--tick-ms", serve.tick_ms, "Tick period in milliseconds (0: as fast as possible)")
      ->check(CLI::NonNegativeNumber);
  serve_cmd->add_option("--record", serve.record, "Write the session as a trace file on exit");

  std::string list_deck;
  auto* list_cmd = app.add_subcommand("list", "List the slides of a deck");
  list_cmd->add_option("--deck", list_deck, "Deck file (default: built-in deck)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*verify_cmd) return cmd_verify(verify);
    if (*compare_cmd) return cmd_compare(compare);
    if (*serve_cmd) return cmd_serve(serve);
    if (*list_cmd) return cmd_list(list_deck);
  } catch (const softbody::SimulationFault& e) {
    std::cerr << "softslides: simulation fault: " << e.what() << '\n';
    return kNumericFault;
  } catch (const std::exception& e) {
    std::cerr << "softslides: " << e.what() << '\n';
    return kConfig;
  }
  return kConfig;
}
