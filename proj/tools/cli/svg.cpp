// SPDX-License-Identifier: Apache-2.0
#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ltdr/error.hpp"
#include "output.hpp"

namespace ltdr::cli {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// "nice" tick step for a span of roughly n ticks
double tick_step(double span, int n) {
    const double raw = span / n;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (f * mag >= raw) return f * mag;
    }
    return 10.0 * mag;
}

}  // namespace

std::string curve_svg(std::span<const double> taus, std::span<const double> rates, std::span<const double> lo,
                      std::span<const double> hi, const std::string& title) {
    if (taus.empty() || rates.size() != taus.size() || lo.size() != taus.size() || hi.size() != taus.size()) {
        throw Error(ErrorKind::Alignment, "curve columns must be non-empty and of equal length");
    }
    if (taus.front() <= 0.0) throw Error(ErrorKind::Domain, "log axis needs positive maturities");

    const double lx0 = std::floor(std::log10(taus.front()));
    const double lx1 = std::ceil(std::log10(taus.back()));
    double y0 = std::min({*std::min_element(rates.begin(), rates.end()), *std::min_element(lo.begin(), lo.end())});
    double y1 = std::max({*std::max_element(rates.begin(), rates.end()), *std::max_element(hi.begin(), hi.end())});
    y0 *= 100.0;
    y1 *= 100.0;
    if (y1 - y0 < 1e-6) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double step = tick_step(y1 - y0, 6);
    y0 = std::floor(y0 / step) * step;
    y1 = std::ceil(y1 / step) * step;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double tau) { return kLeft + (std::log10(tau) - lx0) / (lx1 - lx0 > 0 ? lx1 - lx0 : 1.0) * pw; };
    auto py = [&](double rate) { return kTop + (y1 - rate * 100.0) / (y1 - y0) * ph; };

    auto polyline = [&](std::span<const double> ys, const char* style) {
        std::string pts;
        for (std::size_t i = 0; i < taus.size(); ++i) {
            if (!std::isfinite(ys[i])) continue;
            if (!pts.empty()) pts += ' ';
            pts += num(px(taus[i])) + "," + num(py(ys[i]));
        }
        return "  <polyline fill=\"none\" " + std::string(style) + " points=\"" + pts + "\"/>\n";
    };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "  <rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
    s += "  <text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";

    // grid and ticks
    for (double e = lx0; e <= lx1 + 1e-9; e += 1.0) {
        const double x = kLeft + (e - lx0) / (lx1 - lx0 > 0 ? lx1 - lx0 : 1.0) * pw;
        s += "  <line x1=\"" + num(x) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(x) + "\" y2=\"" + num(kTop + ph) +
             "\" stroke=\"#dddddd\"/>\n";
        s += "  <text x=\"" + num(x) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
             format_number(std::pow(10.0, e)) + "</text>\n";
    }
    for (double v = y0; v <= y1 + step * 1e-6; v += step) {
        const double y = kTop + (y1 - v) / (y1 - y0) * ph;
        s += "  <line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" + num(y) +
             "\" stroke=\"#dddddd\"/>\n";
        s += "  <text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
             format_number(std::round(v * 1e6) / 1e6) + "</text>\n";
    }
    s += "  <rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "  <text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\">maturity (years, log scale)</text>\n";
    s += "  <text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(kTop + ph / 2) + ")\">discount rate (%)</text>\n";

    s += polyline(lo, "stroke=\"#4477aa\" stroke-dasharray=\"5,4\"");
    s += polyline(hi, "stroke=\"#4477aa\" stroke-dasharray=\"5,4\"");
    s += polyline(rates, "stroke=\"black\" stroke-width=\"2\"");
    s += "</svg>\n";
    return s;
}

}  // namespace ltdr::cli
