#include "softslides/trace.hpp"

#include <cstdio>

#include "numfmt.hpp"
#include "softslides/frame.hpp"

namespace slides::harness {

namespace {

using protocol::Message;
using protocol::MessageType;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

VerifyResult diverged(std::uint64_t tick, std::uint64_t checked, std::string message) {
  VerifyResult r;
  r.ok = false;
  r.divergent_tick = tick;
  r.frames_checked = checked;
  r.message = std::move(message);
  return r;
}

}  // namespace

std::string encode_header(const TraceHeader& h) {
  return "{\"format\":\"softslides-trace/1\",\"deck\":\"" + hex64(h.deck_hash) +
         "\",\"slide\":" + protocol::quote(h.slide_id) + ",\"slide_index\":" + std::to_string(h.slide_index) +
         ",\"integrator\":" + protocol::quote(h.integrator) +
         ",\"timestep\":" + softslides::detail::format_double(h.timestep) +
         ",\"substeps\":" + std::to_string(h.substeps) + "}";
}

TraceHeader describe(const protocol::Session& session, std::uint64_t deck_hash) {
  const Presentation& p = session.presentation();
  TraceHeader h;
  h.deck_hash = deck_hash;
  h.slide_id = p.current().id;
  h.slide_index = static_cast<std::uint32_t>(p.current_index());
  if (const auto& scene = p.current().scene) {
    h.integrator = std::string(softbody::to_string(scene->integrator));
    h.timestep = scene->world.params.timestep;
    h.substeps = scene->substeps_per_tick;
  }
  return h;
}

std::size_t resolve_slide(const Presentation& presentation, std::string_view selector) {
  for (std::size_t i = 0; i < presentation.size(); ++i) {
    if (presentation.slides()[i].id == selector) return i;
  }
  if (const auto index = softslides::detail::parse_int<std::size_t>(selector)) {
    if (*index < presentation.size()) return *index;
  }
  throw DeckError(0, "slide", "no slide '" + std::string(selector) + "' in deck");
}

protocol::Session open_session(std::string_view deck_text, std::string_view selector) {
  Presentation p = build_presentation(parse_deck(deck_text));
  p.navigate(NavGoto{resolve_slide(p, selector)});
  return protocol::Session(std::move(p));
}

TraceRecorder::TraceRecorder(const TraceHeader& header) {
  bytes_ = protocol::frame_message({MessageType::Header, encode_header(header)});
}

void TraceRecorder::record(const Message& message) { bytes_ += protocol::frame_message(message); }

void TraceRecorder::frame(const protocol::FrameSnapshot& snapshot) {
  record({MessageType::Frame, protocol::encode_frame(snapshot)});
}

void TraceRecorder::command(std::string_view payload) { record({MessageType::Command, std::string(payload)}); }

std::string run_trace(std::string_view deck_text, std::string_view selector, std::uint64_t ticks) {
  protocol::Session session = open_session(deck_text, selector);
  TraceRecorder recorder(describe(session, deck_hash(deck_text)));
  recorder.frame(session.snapshot());
  for (std::uint64_t i = 0; i < ticks; ++i) recorder.frame(session.advance());
  return recorder.bytes();
}

VerifyResult verify_trace(std::string_view trace_bytes, std::string_view deck_text) {
  protocol::MessageReader reader;
  reader.feed(trace_bytes);

  std::optional<Message> header_msg;
  try {
    header_msg = reader.next();
  } catch (const protocol::FramingError& e) {
    return diverged(0, 0, std::string("unreadable header: ") + e.what());
  }
  if (!header_msg || header_msg->type != MessageType::Header) return diverged(0, 0, "trace does not start with a header");

  // The slide is named in the header; recover it without trusting the rest.
  const std::string& hp = header_msg->payload;
  const std::string key = "\"slide\":\"";
  const auto at = hp.find(key);
  const auto end = at == std::string::npos ? std::string::npos : hp.find('"', at + key.size());
  if (end == std::string::npos) return diverged(0, 0, "header names no slide");
  const std::string slide_id = hp.substr(at + key.size(), end - at - key.size());

  std::optional<protocol::Session> session;
  try {
    session.emplace(open_session(deck_text, slide_id));
  } catch (const std::exception& e) {
    return diverged(0, 0, std::string("cannot open recorded slide: ") + e.what());
  }
  const std::string expected_header = encode_header(describe(*session, deck_hash(deck_text)));
  if (expected_header != hp) {
    return diverged(0, 0, "header mismatch (different deck or configuration)");
  }

  std::uint64_t checked = 0;
  bool first = true;
  while (true) {
    const std::uint64_t next_tick = first ? session->tick() : session->tick() + 1;
    std::optional<Message> m;
    try {
      m = reader.next();
    } catch (const protocol::FramingError& e) {
      return diverged(next_tick, checked, std::string("corrupt record: ") + e.what());
    }
    if (!m) break;

    if (m->type == MessageType::Command) {
      // Rejected commands were rejected live too; replay them the same way.
      (void)session->apply_encoded(m->payload);
      continue;
    }
    if (m->type != MessageType::Frame) {
      return diverged(next_tick, checked, "unexpected record type in trace body");
    }
    const auto snapshot = first ? session->snapshot() : session->advance();
    first = false;
    if (protocol::encode_frame(snapshot) != m->payload) {
      return diverged(snapshot.tick, checked, "frame differs from re-simulation");
    }
    ++checked;
  }
  if (reader.pending() != 0) {
    return diverged(first ? session->tick() : session->tick() + 1, checked, "truncated record at end of trace");
  }
  if (checked == 0) return diverged(0, 0, "trace holds no frames");

  VerifyResult ok;
  ok.ok = true;
  ok.frames_checked = checked;
  ok.message = "verified " + std::to_string(checked) + " frames";
  return ok;
}

}  // namespace slides::harness
