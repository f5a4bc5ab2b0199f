#include "rydpulse/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rydpulse {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string shape(const Waveform &wf) {
  std::string s = to_string(wf.kind());
  s += '(';
  const auto &p = wf.parameters();
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + num(p[i]);
  if (wf.kind() == WaveformKind::Arbitrary) s += "n=" + std::to_string(wf.duration());
  return s + ')';
}

std::string names(const Register &reg, const std::vector<std::size_t> &idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + reg.atom(idx[i]).name;
  return s;
}

std::string xml_escape(const std::string &in) {
  std::string out;
  for (char c : in) {
    switch (c) {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

} // namespace

DrawData draw_data(const Sequence &seq) {
  DrawData d;
  d.duration = seq.total_duration();
  d.measurement_basis = seq.measurement_basis();
  const auto n = static_cast<std::size_t>(d.duration);
  for (const auto &ch : seq.channels()) {
    ChannelTrace tr{ch.name, ch.spec.id, ch.spec.basis, std::vector<double>(n, 0.0),
                    std::vector<double>(n, 0.0), {}};
    for (const auto &slot : ch.slots) {
      if (slot.kind == SlotKind::Target) {
        std::vector<std::string> qs;
        for (auto q : slot.targets) qs.push_back(seq.reg().atom(q).name);
        tr.targets.push_back({slot.start, std::move(qs)});
      } else if (slot.kind == SlotKind::Pulse) {
        const auto amp = slot.pulse->amplitude().samples();
        const auto det = slot.pulse->detuning().samples();
        for (std::size_t k = 0; k < amp.size(); ++k) {
          tr.amplitude[std::size_t(slot.start) + k] = amp[k];
          tr.detuning[std::size_t(slot.start) + k] = det[k];
        }
      }
    }
    d.channels.push_back(std::move(tr));
  }
  return d;
}

std::string render_text(const Sequence &seq) {
  std::ostringstream os;
  os << "sequence duration=" << seq.total_duration() << " ns measurement="
     << (seq.measurement_basis() ? to_string(*seq.measurement_basis()) : "none") << '\n';
  for (const auto &ch : seq.channels()) {
    os << "channel " << ch.name << " id=" << ch.spec.id << " basis=" << to_string(ch.spec.basis)
       << " addressing=" << to_string(ch.spec.addressing) << '\n';
    for (const auto &slot : ch.slots) {
      os << "  " << slot.start << ' ' << slot.end << ' ';
      switch (slot.kind) {
      case SlotKind::Target: os << "target " << names(seq.reg(), slot.targets); break;
      case SlotKind::Delay: os << "delay"; break;
      case SlotKind::Pulse:
        os << "pulse amp=" << shape(slot.pulse->amplitude())
           << " det=" << shape(slot.pulse->detuning()) << " phase=" << num(slot.pulse->phase());
        break;
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string render_svg(const Sequence &seq) {
  const auto d = draw_data(seq);
  const double width = 800.0;
  const double left = 140.0;
  const double track_h = 60.0;
  const double gap = 30.0;
  const double plot_w = width - left - 20.0;
  const double height = 40.0 + double(d.channels.size()) * (2 * track_h + gap) + 20.0;
  const double tscale = d.duration > 0 ? plot_w / double(d.duration) : 0.0;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"10\" y=\"20\">duration " << d.duration << " ns";
  if (d.measurement_basis) os << ", measured in " << to_string(*d.measurement_basis);
  os << "</text>\n";

  double y0 = 40.0;
  for (const auto &ch : d.channels) {
    auto track = [&](const std::vector<double> &v, double top, const char *label,
                     const char *color) {
      double peak = 0.0;
      for (double x : v) peak = std::max(peak, std::abs(x));
      const double mid = top + track_h / 2.0;
      const double vscale = peak > 0.0 ? (track_h / 2.0 - 4.0) / peak : 0.0;
      os << "<text x=\"10\" y=\"" << mid + 4 << "\">" << xml_escape(ch.name) << ' ' << label
         << "</text>\n";
      os << "<line x1=\"" << left << "\" y1=\"" << mid << "\" x2=\"" << left + plot_w
         << "\" y2=\"" << mid << "\" stroke=\"#ccc\"/>\n";
      if (v.empty()) return;
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
      for (std::size_t t = 0; t < v.size(); ++t) {
        os << left + double(t) * tscale << ',' << mid - v[t] * vscale << ' ';
      }
      os << "\"/>\n";
    };
    track(ch.amplitude, y0, "amp", "#1f77b4");
    track(ch.detuning, y0 + track_h, "det", "#d62728");
    for (const auto &m : ch.targets) {
      const double x = left + double(m.time) * tscale;
      std::string label;
      for (std::size_t i = 0; i < m.qubits.size(); ++i) label += (i ? "," : "") + m.qubits[i];
      os << "<line x1=\"" << x << "\" y1=\"" << y0 << "\" x2=\"" << x << "\" y2=\""
         << y0 + 2 * track_h << "\" stroke=\"#888\" stroke-dasharray=\"3,3\"/>\n";
      os << "<text x=\"" << x + 2 << "\" y=\"" << y0 + 10 << "\" fill=\"#555\">"
         << xml_escape(label) << "</text>\n";
    }
    y0 += 2 * track_h + gap;
  }
  os << "</svg>\n";
  return os.str();
}

} // namespace rydpulse
