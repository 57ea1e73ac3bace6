#include "softslides/frame.hpp"

#include <cmath>

#include "numfmt.hpp"

namespace slides::protocol {

namespace {

using softslides::detail::format_double;
using softslides::detail::parse_double;
using softslides::detail::parse_int;

constexpr char kHex[] = "0123456789abcdef";

void put_number(std::string& out, double v) { out += format_double(v); }

// Strict reader over canonical frame text.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& message) const { throw FrameDecodeError(pos_, message); }

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ == text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void expect(std::string_view literal) {
    if (text_.substr(pos_, literal.size()) != literal) {
      fail("expected '" + std::string(literal) + "'");
    }
    pos_ += literal.size();
  }

  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::string_view number_token() {
    const std::size_t start = pos_;
    while (!at_end()) {
      const char c = text_[pos_];
      if ((c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.' || c == 'e' || c == 'E') {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected a number");
    return text_.substr(start, pos_ - start);
  }

  double real() {
    const std::size_t start = pos_;
    const auto v = parse_double(number_token());
    if (!v || !std::isfinite(*v)) throw FrameDecodeError(start, "malformed real number");
    return *v;
  }

  template <class Int>
  Int integer() {
    const std::size_t start = pos_;
    const auto v = parse_int<Int>(number_token());
    if (!v) throw FrameDecodeError(start, "malformed integer");
    return *v;
  }

  bool boolean() {
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    fail("expected true or false");
  }

  std::string string() {
    expect("\"");
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated string");
      const char c = text_[pos_];
      if (c == '"') {
        ++pos_;
        return out;
      }
      if (static_cast<unsigned char>(c) < 0x20) fail("raw control character in string");
      if (c != '\\') {
        out += c;
        ++pos_;
        continue;
      }
      ++pos_;
      const char e = peek();
      if (e == '"' || e == '\\') {
        out += e;
        ++pos_;
      } else if (e == 'u') {
        ++pos_;
        if (text_.size() - pos_ < 4) fail("truncated \\u escape");
        unsigned value = 0;
        for (std::size_t i = 0; i < 4; ++i) {
          const char h = text_[pos_ + i];
          const char* p = std::char_traits<char>::find(kHex, 16, h);
          if (!p) fail("bad \\u escape");
          value = value * 16 + static_cast<unsigned>(p - kHex);
        }
        if (value >= 0x20) fail("\\u escape only allowed for control characters");
        out += static_cast<char>(value);
        pos_ += 4;
      } else {
        fail("unsupported escape");
      }
    }
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

template <class F>
void read_list(Reader& r, F&& item) {
  r.expect("[");
  if (r.consume(']')) return;
  do {
    item();
  } while (r.consume(','));
  r.expect("]");
}

Anchor read_anchor(Reader& r) {
  const std::size_t at = r.pos();
  const auto anchor = parse_anchor(r.string());
  if (!anchor) throw FrameDecodeError(at, "unknown anchor");
  return *anchor;
}

BodyView read_body(Reader& r) {
  BodyView body;
  r.expect("{\"positions\":");
  std::vector<double> flat;
  read_list(r, [&] { flat.push_back(r.real()); });
  if (flat.size() % 2 != 0) r.fail("positions must hold x,y pairs");
  for (std::size_t i = 0; i < flat.size(); i += 2) body.positions.push_back({flat[i], flat[i + 1]});

  r.expect(",\"springs\":");
  std::vector<std::uint32_t> ends;
  read_list(r, [&] { ends.push_back(r.integer<std::uint32_t>()); });
  if (ends.size() % 2 != 0) r.fail("springs must hold endpoint pairs");
  for (std::size_t i = 0; i < ends.size(); i += 2) {
    if (ends[i] >= body.positions.size() || ends[i + 1] >= body.positions.size()) {
      r.fail("spring endpoint out of range");
    }
    body.springs.emplace_back(ends[i], ends[i + 1]);
  }

  r.expect(",\"ratios\":");
  read_list(r, [&] { body.ratios.push_back(r.real()); });
  if (body.ratios.size() != body.springs.size()) r.fail("one ratio per spring expected");
  r.expect("}");
  return body;
}

}  // namespace

FrameDecodeError::FrameDecodeError(std::size_t offset, const std::string& message)
    : std::runtime_error("frame decode error at byte " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

std::string quote(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  out += '"';
  for (const char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (u < 0x20) {
      out += "\\u00";
      out += kHex[u >> 4];
      out += kHex[u & 0xf];
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

FrameSnapshot make_snapshot(const Presentation& presentation, std::uint64_t tick) {
  FrameSnapshot snap;
  const Slide& slide = presentation.current();
  snap.tick = tick;
  snap.slide_index = static_cast<std::uint32_t>(presentation.current_index());
  snap.slide_title = slide.title;
  if (presentation.tidgets_enabled()) {
    for (const auto& t : slide.tidgets) {
      if (!t.visible) continue;
      TidgetView view;
      view.anchor = t.anchor;
      view.lines.assign(t.lines.begin(), t.lines.begin() + static_cast<std::ptrdiff_t>(t.reveal_index));
      snap.tidgets.push_back(std::move(view));
    }
  }
  if (slide.scene) {
    const auto& scene = *slide.scene;
    snap.integrator = std::string(softbody::to_string(scene.integrator));
    snap.running = scene.running;
    for (const auto& body : scene.world.bodies) {
      BodyView view;
      view.positions.reserve(body.particles.size());
      for (const auto& p : body.particles) view.positions.push_back(p.position);
      for (const auto& s : body.springs) {
        view.springs.emplace_back(static_cast<std::uint32_t>(s.a), static_cast<std::uint32_t>(s.b));
        const double len = softbody::length(body.particles[s.b].position - body.particles[s.a].position);
        view.ratios.push_back(s.rest_length > 0.0 ? len / s.rest_length : 1.0);
      }
      snap.bodies.push_back(std::move(view));
    }
    if (const auto& drag = scene.world.drag) {
      snap.drag = DragView{static_cast<std::uint32_t>(drag->body), static_cast<std::uint32_t>(drag->particle),
                           drag->target};
    }
  }
  return snap;
}

std::string encode_frame(const FrameSnapshot& s) {
  std::string out;
  out.reserve(256);
  out += "{\"tick\":";
  out += std::to_string(s.tick);
  out += ",\"slide\":";
  out += std::to_string(s.slide_index);
  out += ",\"title\":";
  out += quote(s.slide_title);
  out += ",\"integrator\":";
  out += quote(s.integrator);
  out += ",\"running\":";
  out += s.running ? "true" : "false";

  out += ",\"tidgets\":[";
  for (std::size_t i = 0; i < s.tidgets.size(); ++i) {
    if (i) out += ',';
    out += "{\"anchor\":";
    out += quote(to_string(s.tidgets[i].anchor));
    out += ",\"lines\":[";
    for (std::size_t j = 0; j < s.tidgets[i].lines.size(); ++j) {
      if (j) out += ',';
      out += quote(s.tidgets[i].lines[j]);
    }
    out += "]}";
  }

  out += "],\"bodies\":[";
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    const auto& b = s.bodies[i];
    if (i) out += ',';
    out += "{\"positions\":[";
    for (std::size_t j = 0; j < b.positions.size(); ++j) {
      if (j) out += ',';
      put_number(out, b.positions[j].x);
      out += ',';
      put_number(out, b.positions[j].y);
    }
    out += "],\"springs\":[";
    for (std::size_t j = 0; j < b.springs.size(); ++j) {
      if (j) out += ',';
      out += std::to_string(b.springs[j].first);
      out += ',';
      out += std::to_string(b.springs[j].second);
    }
    out += "],\"ratios\":[";
    for (std::size_t j = 0; j < b.ratios.size(); ++j) {
      if (j) out += ',';
      put_number(out, b.ratios[j]);
    }
    out += "]}";
  }

  out += "],\"drag\":";
  if (s.drag) {
    out += "{\"body\":";
    out += std::to_string(s.drag->body);
    out += ",\"particle\":";
    out += std::to_string(s.drag->particle);
    out += ",\"x\":";
    put_number(out, s.drag->target.x);
    out += ",\"y\":";
    put_number(out, s.drag->target.y);
    out += '}';
  } else {
    out += "null";
  }
  out += '}';
  return out;
}

FrameSnapshot decode_frame(std::string_view bytes) {
  Reader r(bytes);
  FrameSnapshot s;
  r.expect("{\"tick\":");
  s.tick = r.integer<std::uint64_t>();
  r.expect(",\"slide\":");
  s.slide_index = r.integer<std::uint32_t>();
  r.expect(",\"title\":");
  s.slide_title = r.string();
  r.expect(",\"integrator\":");
  s.integrator = r.string();
  r.expect(",\"running\":");
  s.running = r.boolean();

  r.expect(",\"tidgets\":");
  read_list(r, [&] {
    TidgetView t;
    r.expect("{\"anchor\":");
    t.anchor = read_anchor(r);
    r.expect(",\"lines\":");
    read_list(r, [&] { t.lines.push_back(r.string()); });
    r.expect("}");
    s.tidgets.push_back(std::move(t));
  });

  r.expect(",\"bodies\":");
  read_list(r, [&] { s.bodies.push_back(read_body(r)); });

  r.expect(",\"drag\":");
  if (r.peek() == 'n') {
    r.expect("null");
  } else {
    DragView d;
    r.expect("{\"body\":");
    d.body = r.integer<std::uint32_t>();
    r.expect(",\"particle\":");
    d.particle = r.integer<std::uint32_t>();
    r.expect(",\"x\":");
    d.target.x = r.real();
    r.expect(",\"y\":");
    d.target.y = r.real();
    r.expect("}");
    if (d.body >= s.bodies.size() || d.particle >= s.bodies[d.body].positions.size()) {
      r.fail("drag refers to a missing particle");
    }
    s.drag = d;
  }
  r.expect("}");
  if (!r.at_end()) r.fail("trailing bytes after frame");

  // Anything that parsed but is spelled differently from the canonical
  // encoding ("1.0", "+1", "A") is rejected at the first differing byte.
  const std::string canonical = encode_frame(s);
  if (canonical != bytes) {
    std::size_t i = 0;
    while (i < canonical.size() && i < bytes.size() && canonical[i] == bytes[i]) ++i;
    throw FrameDecodeError(i, "non-canonical encoding");
  }
  return s;
}

}  // namespace slides::protocol
