// Copyright 2026 the chaosbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chaosbench/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace chaosbench::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;  // legend column
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    if (v != 0.0 && (std::abs(v) < 1e-2 || std::abs(v) >= 1e5)) {
        std::snprintf(buf, sizeof(buf), "%.1e", v);
    } else {
        std::snprintf(buf, sizeof(buf), "%.3g", v);
    }
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void finish() {
        if (!std::isfinite(lo)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
};

class Canvas {
public:
    explicit Canvas(const Chart& c) : chart_(c) {
        out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
             << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
             << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight)
             << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        if (!c.metadata.empty()) {
            out_ << "<metadata>" << escape(c.metadata) << "</metadata>\n";
        }
        out_ << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
             << "\" fill=\"white\"/>\n";
        text(kWidth / 2 - kRight / 2 + kLeft / 2, 22, c.title, "middle", 15);
        text(kLeft + plot_w() / 2, kHeight - 15, c.x_label, "middle");
        out_ << "<text x=\"18\" y=\"" << num(kTop + plot_h() / 2)
             << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << num(kTop + plot_h() / 2)
             << ")\">" << escape(c.y_label) << "</text>\n";
    }

    static double plot_w() { return kWidth - kLeft - kRight; }
    static double plot_h() { return kHeight - kTop - kBottom; }

    void set_y(Range r) { y_ = r; }
    void set_x(Range r) { x_ = r; }

    double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * plot_w(); }
    double py(double y) const { return kTop + plot_h() - (y - y_.lo) / (y_.hi - y_.lo) * plot_h(); }

    double ty(double v) const { return chart_.log_y ? std::log10(v) : v; }

    void frame() {
        out_ << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w())
             << "\" height=\"" << num(plot_h()) << "\" fill=\"none\" stroke=\"black\"/>\n";
    }

    void y_ticks() {
        for (int i = 0; i <= 5; ++i) {
            const double v = y_.lo + (y_.hi - y_.lo) * i / 5.0;
            const double y = py(v);
            line(kLeft - 5, y, kLeft, y, "black");
            text(kLeft - 8, y + 4, tick_label(chart_.log_y ? std::pow(10.0, v) : v), "end");
        }
    }

    void x_ticks() {
        for (int i = 0; i <= 5; ++i) {
            const double v = x_.lo + (x_.hi - x_.lo) * i / 5.0;
            const double x = px(v);
            line(x, kTop + plot_h(), x, kTop + plot_h() + 5, "black");
            text(x, kTop + plot_h() + 18, tick_label(v), "middle");
        }
    }

    void category_ticks(const std::vector<std::string>& cats) {
        for (std::size_t i = 0; i < cats.size(); ++i) {
            text(px(static_cast<double>(i)), kTop + plot_h() + 18, cats[i], "middle");
        }
    }

    void legend(const std::vector<std::pair<std::string, std::string>>& entries) {
        double y = kTop + 10;
        for (const auto& [label, color] : entries) {
            out_ << "<rect x=\"" << num(kWidth - kRight + 12) << "\" y=\"" << num(y - 9)
                 << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
            text(kWidth - kRight + 28, y, label, "start");
            y += 18;
        }
    }

    void line(double x1, double y1, double x2, double y2, const std::string& color,
              double width = 1.0) {
        out_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
             << "\" y2=\"" << num(y2) << "\" stroke=\"" << color << "\" stroke-width=\"" << num(width)
             << "\"/>\n";
    }

    void circle(double x, double y, double r, const std::string& color) {
        out_ << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r)
             << "\" fill=\"" << color << "\"/>\n";
    }

    void rect(double x, double y, double w, double h, const std::string& color) {
        out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
             << "\" height=\"" << num(h) << "\" fill=\"" << color << "\"/>\n";
    }

    void text(double x, double y, const std::string& s, const char* anchor, int size = 12) {
        out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor
             << "\" font-size=\"" << size << "\">" << escape(s) << "</text>\n";
    }

    void raw(const std::string& s) { out_ << s; }

    std::string finish() {
        out_ << "</svg>\n";
        return out_.str();
    }

private:
    const Chart& chart_;
    std::ostringstream out_;
    Range x_, y_;
};

}  // namespace

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string palette(std::size_t i) {
    static const char* colours[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    return colours[i % (sizeof(colours) / sizeof(colours[0]))];
}

std::string scatter(const Chart& chart, const std::vector<PointGroup>& groups) {
    Canvas cv(chart);
    Range xr, yr;
    for (const auto& g : groups) {
        for (double v : g.x) xr.add(v);
        for (double v : g.y) yr.add(v);
    }
    xr.finish();
    yr.finish();
    cv.set_x(xr);
    cv.set_y(yr);
    cv.frame();
    cv.x_ticks();
    cv.y_ticks();
    std::vector<std::pair<std::string, std::string>> legend;
    for (const auto& g : groups) {
        cv.raw("<g fill=\"" + g.color + "\">\n");
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            cv.raw("<circle cx=\"" + num(cv.px(g.x[i])) + "\" cy=\"" + num(cv.py(g.y[i])) +
                   "\" r=\"1.50\"/>\n");
        }
        cv.raw("</g>\n");
        legend.emplace_back(g.label, g.color);
    }
    cv.legend(legend);
    return cv.finish();
}

std::string category_points(const Chart& chart, const std::vector<std::string>& categories,
                            const std::vector<Series>& series) {
    Canvas cv(chart);
    Range xr{-0.5, static_cast<double>(categories.size()) - 0.5};
    Range yr;
    for (const auto& s : series)
        for (double v : s.values) yr.add(cv.ty(v));
    yr.finish();
    cv.set_x(xr);
    cv.set_y(yr);
    cv.frame();
    cv.category_ticks(categories);
    cv.y_ticks();
    std::vector<std::pair<std::string, std::string>> legend;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.values.size() && i < categories.size(); ++i) {
            const double v = cv.ty(s.values[i]);
            if (std::isfinite(v)) cv.circle(cv.px(static_cast<double>(i)), cv.py(v), 5.0, s.color);
        }
        legend.emplace_back(s.label, s.color);
    }
    cv.legend(legend);
    return cv.finish();
}

std::string grouped_bars(const Chart& chart, const std::vector<std::string>& categories,
                         const std::vector<Series>& series) {
    Canvas cv(chart);
    Range xr{-0.5, static_cast<double>(categories.size()) - 0.5};
    Range yr;
    for (const auto& s : series)
        for (double v : s.values) yr.add(cv.ty(v));
    yr.finish();
    if (!chart.log_y) yr.lo = std::min(yr.lo, 0.0);
    cv.set_x(xr);
    cv.set_y(yr);
    cv.frame();
    cv.category_ticks(categories);
    cv.y_ticks();
    const double slot = Canvas::plot_w() / static_cast<double>(std::max<std::size_t>(1, categories.size()));
    const double bar = 0.8 * slot / static_cast<double>(std::max<std::size_t>(1, series.size()));
    std::vector<std::pair<std::string, std::string>> legend;
    for (std::size_t s = 0; s < series.size(); ++s) {
        for (std::size_t i = 0; i < series[s].values.size() && i < categories.size(); ++i) {
            const double v = cv.ty(series[s].values[i]);
            if (!std::isfinite(v)) continue;
            const double x0 = cv.px(static_cast<double>(i)) - 0.4 * slot + bar * static_cast<double>(s);
            const double top = cv.py(v);
            const double base = cv.py(yr.lo);
            cv.rect(x0, top, bar, std::max(0.0, base - top), series[s].color);
        }
        legend.emplace_back(series[s].label, series[s].color);
    }
    cv.legend(legend);
    return cv.finish();
}

std::string lines(const Chart& chart, const std::vector<double>& x, const std::vector<Series>& series) {
    Canvas cv(chart);
    Range xr, yr;
    for (double v : x) xr.add(v);
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const double e = i < s.errors.size() ? s.errors[i] : 0.0;
            yr.add(cv.ty(s.values[i] - e));
            yr.add(cv.ty(s.values[i] + e));
        }
    }
    xr.finish();
    yr.finish();
    cv.set_x(xr);
    cv.set_y(yr);
    cv.frame();
    cv.x_ticks();
    cv.y_ticks();
    std::vector<std::pair<std::string, std::string>> legend;
    for (const auto& s : series) {
        std::string pts;
        for (std::size_t i = 0; i < s.values.size() && i < x.size(); ++i) {
            pts += (i ? " " : "") + num(cv.px(x[i])) + "," + num(cv.py(cv.ty(s.values[i])));
        }
        cv.raw("<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"2.00\" points=\"" +
               pts + "\"/>\n");
        for (std::size_t i = 0; i < s.values.size() && i < x.size(); ++i) {
            const double cx = cv.px(x[i]);
            if (i < s.errors.size() && s.errors[i] > 0.0) {
                const double lo = cv.py(cv.ty(s.values[i] - s.errors[i]));
                const double hi = cv.py(cv.ty(s.values[i] + s.errors[i]));
                cv.line(cx, lo, cx, hi, s.color);
                cv.line(cx - 4, lo, cx + 4, lo, s.color);
                cv.line(cx - 4, hi, cx + 4, hi, s.color);
            }
            cv.circle(cx, cv.py(cv.ty(s.values[i])), 3.0, s.color);
        }
        legend.emplace_back(s.label, s.color);
    }
    cv.legend(legend);
    return cv.finish();
}

std::string heatmap(const Chart& chart, const std::vector<std::string>& row_labels,
                    const std::vector<std::string>& col_labels,
                    const std::vector<std::vector<double>>& values) {
    Canvas cv(chart);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& row : values) {
        for (double v : row) {
            if (v > 0.0 && std::isfinite(v)) {
                lo = std::min(lo, std::log10(v));
                hi = std::max(hi, std::log10(v));
            }
        }
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    const double span = hi - lo > 1e-12 ? hi - lo : 1.0;
    const std::size_t nr = row_labels.size();
    const std::size_t nc = col_labels.size();
    const double cw = Canvas::plot_w() / static_cast<double>(std::max<std::size_t>(1, nc));
    const double ch = Canvas::plot_h() / static_cast<double>(std::max<std::size_t>(1, nr));
    // Ramp from #f7fbff (low) to #08306b (high), linear in log10 of the value.
    auto colour = [&](double v) {
        const double t = v > 0.0 && std::isfinite(v) ? (std::log10(v) - lo) / span : 1.0;
        const int r = static_cast<int>(std::lround(0xf7 + t * (0x08 - 0xf7)));
        const int g = static_cast<int>(std::lround(0xfb + t * (0x30 - 0xfb)));
        const int b = static_cast<int>(std::lround(0xff + t * (0x6b - 0xff)));
        char buf[8];
        std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
        return std::string(buf);
    };
    for (std::size_t r = 0; r < nr && r < values.size(); ++r) {
        for (std::size_t c = 0; c < nc && c < values[r].size(); ++c) {
            const double x = kLeft + cw * static_cast<double>(c);
            const double y = kTop + ch * static_cast<double>(r);
            cv.rect(x, y, cw, ch, colour(values[r][c]));
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.1e", values[r][c]);
            const double t = values[r][c] > 0.0 ? (std::log10(values[r][c]) - lo) / span : 1.0;
            cv.raw("<text x=\"" + num(x + cw / 2) + "\" y=\"" + num(y + ch / 2 + 4) +
                   "\" text-anchor=\"middle\" font-size=\"9\" fill=\"" +
                   (t > 0.5 ? std::string("white") : std::string("black")) + "\">" + buf +
                   "</text>\n");
        }
        cv.text(kLeft - 6, kTop + ch * (static_cast<double>(r) + 0.5) + 4, row_labels[r], "end");
    }
    for (std::size_t c = 0; c < nc; ++c) {
        cv.text(kLeft + cw * (static_cast<double>(c) + 0.5), kTop + Canvas::plot_h() + 18,
                col_labels[c], "middle");
    }
    cv.frame();
    cv.legend({{"log10 MSE " + tick_label(lo), colour(std::pow(10.0, lo))},
               {"log10 MSE " + tick_label(hi), colour(std::pow(10.0, hi))}});
    return cv.finish();
}

}  // namespace chaosbench::svg
