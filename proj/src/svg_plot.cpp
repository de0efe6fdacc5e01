#include "mlabstain/svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

namespace mlabstain {

namespace {

constexpr double kPanelWidth = 420.0;
constexpr double kPanelHeight = 300.0;
constexpr double kMargin = 55.0;

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double extra = 0.05 * (hi - lo);
        lo -= extra;
        hi += extra;
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const char* color(Series s) {
    switch (s) {
        case Series::Partial: return "#1f77b4";
        case Series::Mlc: return "#d62728";
        case Series::Abs: return "#2ca02c";
    }
    return "#000000";
}

void panel(std::string& out, double x0, const std::string& title, const std::vector<SweepRow>& rows,
           double SweepRow::*field, const Range& cx) {
    Range ry;
    for (const auto& r : rows) ry.include(r.*field);
    ry.pad();
    const double left = x0 + kMargin;
    const double right = x0 + kPanelWidth - 15.0;
    const double top = 35.0;
    const double bottom = kPanelHeight - 40.0;
    auto px = [&](double c) { return left + (c - cx.lo) / (cx.hi - cx.lo) * (right - left); };
    auto py = [&](double v) { return bottom - (v - ry.lo) / (ry.hi - ry.lo) * (bottom - top); };

    out += "<text x=\"" + num((left + right) / 2) + "\" y=\"20\" text-anchor=\"middle\">" + title + "</text>\n";
    out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(right - left) + "\" height=\"" +
           num(bottom - top) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double c = cx.lo + (cx.hi - cx.lo) * t / 4.0;
        const double v = ry.lo + (ry.hi - ry.lo) * t / 4.0;
        out += "<text x=\"" + num(px(c)) + "\" y=\"" + num(bottom + 16) + "\" text-anchor=\"middle\">" + label(c) +
               "</text>\n";
        out += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(v) + 4) + "\" text-anchor=\"end\">" + label(v) +
               "</text>\n";
    }
    out += "<text x=\"" + num((left + right) / 2) + "\" y=\"" + num(bottom + 34) + "\" text-anchor=\"middle\">c</text>\n";

    for (Series s : {Series::Partial, Series::Mlc, Series::Abs}) {
        std::string pts;
        for (const auto& r : rows) {
            if (r.series != s) continue;
            pts += num(px(r.c)) + "," + num(py(r.*field)) + " ";
        }
        if (pts.empty()) continue;
        pts.pop_back();
        out += "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" + std::string(color(s)) + "\" points=\"" + pts +
               "\"/>\n";
    }
}

}  // namespace

std::string render_sweep_svg(const std::vector<SweepRow>& rows) {
    std::vector<SweepRow> agg;
    for (const auto& r : rows)
        if (r.fold == 0) agg.push_back(r);
    if (agg.empty()) throw InputError("no aggregate rows to plot");

    Range cx;
    for (const auto& r : agg) cx.include(r.c);
    if (!(cx.hi > cx.lo)) cx.pad();

    const std::string loss_title = agg.front().loss == LossKind::Hamming ? "Hamming loss x100/m"
                                   : agg.front().loss == LossKind::Rank  ? "rank loss / m"
                                                                         : "F-measure";
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
        num(2 * kPanelWidth) + "\" height=\"" + num(kPanelHeight + 30) +
        "\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    panel(out, 0.0, loss_title + " (" + std::string(to_string(agg.front().penalty)) + ")", agg, &SweepRow::gen_loss,
          cx);
    panel(out, kPanelWidth, "abstention size (%)", agg, &SweepRow::abstention_pct, cx);

    double lx = kMargin;
    for (Series s : {Series::Partial, Series::Mlc, Series::Abs}) {
        const double ly = kPanelHeight + 15.0;
        out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 20) + "\" y2=\"" +
               num(ly - 4) + "\" stroke-width=\"2\" stroke=\"" + color(s) + "\"/>\n";
        out += "<text x=\"" + num(lx + 25) + "\" y=\"" + num(ly) + "\">" + std::string(to_string(s)) + "</text>\n";
        lx += 100.0;
    }
    out += "</svg>\n";
    return out;
}

void write_sweep_svg(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << render_sweep_svg(rows);
}

}  // namespace mlabstain
