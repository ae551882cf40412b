#include "emff/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace emff {

namespace {

constexpr double kWidth = 700.0;
constexpr double kPanelHeight = 150.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kPanelGap = 34.0;

std::string fmt(double x, const char* spec = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

void draw_panel(std::ostringstream& out, double top, const std::string& label,
                const std::vector<double>& t, const std::vector<double>& y) {
    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    double y_min = *std::min_element(y.begin(), y.end());
    double y_max = *std::max_element(y.begin(), y.end());
    if (y_max - y_min < 1e-12) {
        const double pad = std::max(1e-12, std::fabs(y_max) * 0.05 + 1e-6);
        y_min -= pad;
        y_max += pad;
    }
    const double t_min = t.front();
    const double t_max = t.back() > t_min ? t.back() : t_min + 1.0;

    out << "<rect x=\"" << fmt(kMarginLeft, "%.2f") << "\" y=\"" << fmt(top, "%.2f")
        << "\" width=\"" << fmt(plot_w, "%.2f") << "\" height=\""
        << fmt(kPanelHeight, "%.2f")
        << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(kMarginLeft, "%.2f") << "\" y=\""
        << fmt(top - 6.0, "%.2f") << "\" font-family=\"monospace\" font-size=\"13\">"
        << label << "</text>\n";
    out << "<text x=\"" << fmt(kMarginLeft - 6.0, "%.2f") << "\" y=\""
        << fmt(top + 10.0, "%.2f")
        << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">"
        << fmt(y_max) << "</text>\n";
    out << "<text x=\"" << fmt(kMarginLeft - 6.0, "%.2f") << "\" y=\""
        << fmt(top + kPanelHeight, "%.2f")
        << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">"
        << fmt(y_min) << "</text>\n";

    out << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" points=\"";
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double px =
            kMarginLeft + plot_w * (t[k] - t_min) / (t_max - t_min);
        const double py =
            top + kPanelHeight - kPanelHeight * (y[k] - y_min) / (y_max - y_min);
        if (k) out << " ";
        out << fmt(px, "%.2f") << "," << fmt(py, "%.2f");
    }
    out << "\"/>\n";
}

} // namespace

std::string pair_plot_svg(const Telemetry& tel, int i, int j) {
    if (tel.rows.empty()) {
        throw std::invalid_argument("pair_plot_svg: empty telemetry");
    }
    const int idx = tel.pair_index(i, j);
    std::vector<double> t, q_abs, r_abs, v, cur, f;
    for (const auto& row : tel.rows) {
        const PairSample& p = row.pairs[static_cast<std::size_t>(idx)];
        t.push_back(row.t);
        q_abs.push_back(std::fabs(p.q));
        r_abs.push_back(std::fabs(p.r_hat));
        v.push_back(p.v_hat);
        cur.push_back(p.current);
        f.push_back(p.f_hat);
    }

    const double height = kMarginTop + 5.0 * (kPanelHeight + kPanelGap);
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth, "%.0f")
        << "\" height=\"" << fmt(height, "%.0f") << "\" viewBox=\"0 0 "
        << fmt(kWidth, "%.0f") << " " << fmt(height, "%.0f") << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    out << "<text x=\"" << fmt(kWidth / 2.0, "%.2f") << "\" y=\"18\""
        << " font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">pair ("
        << i << ", " << j << ")</text>\n";

    const std::string suffix =
        "_" + std::to_string(i) + "_" + std::to_string(j) + " vs t_s";
    const char* names[5] = {"|q_m|", "|r_hat_m|", "v_hat_mps", "I_amp_A", "F_hat_N"};
    const std::vector<double>* series[5] = {&q_abs, &r_abs, &v, &cur, &f};
    for (int p = 0; p < 5; ++p) {
        const double top = kMarginTop + p * (kPanelHeight + kPanelGap) + 14.0;
        draw_panel(out, top, names[p] + suffix, t, *series[p]);
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace emff
