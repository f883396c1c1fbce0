#include "modechoice/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "modechoice/fmt.hpp"

namespace modechoice {

namespace {

struct Series {
    std::string label;
    std::string color;
    std::vector<int> years;
    std::vector<double> mean, lo, hi;
};

} // namespace

std::string plot_shares_svg(std::span<const AggregateRow> rows, const PlotSpec& spec) {
    // Legend labels follow the mot/car/pub convention of the share columns.
    std::map<std::string, Series> series{
        {"share_moto", {"mot", "#d62728", {}, {}, {}, {}}},
        {"share_car", {"car", "#1f77b4", {}, {}, {}, {}}},
        {"share_pub", {"pub", "#2ca02c", {}, {}, {}, {}}},
    };
    for (const AggregateRow& r : rows) {
        auto it = series.find(r.indicator);
        if (it == series.end()) continue;
        it->second.years.push_back(r.year);
        it->second.mean.push_back(r.mean);
        it->second.lo.push_back(r.ci_low);
        it->second.hi.push_back(r.ci_high);
    }
    int x_min = 0, x_max = 0;
    bool any = false;
    for (auto& [k, s] : series) {
        if (s.years.empty()) continue;
        int lo = *std::min_element(s.years.begin(), s.years.end());
        int hi = *std::max_element(s.years.begin(), s.years.end());
        if (!any) {
            x_min = lo;
            x_max = hi;
            any = true;
        } else {
            x_min = std::min(x_min, lo);
            x_max = std::max(x_max, hi);
        }
    }
    if (!any) throw DataError("plot: no share series in the aggregate input");
    if (x_max == x_min) x_max = x_min + 1;

    const double ml = 60, mr = 20, mt = 40, mb = 45;
    const double pw = spec.width - ml - mr;
    const double ph = spec.height - mt - mb;
    auto xs = [&](double year) { return ml + (year - x_min) / double(x_max - x_min) * pw; };
    auto ys = [&](double v) {
        return mt + (spec.y_max - v) / (spec.y_max - spec.y_min) * ph;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << spec.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << spec.title << "</text>\n";

    // axes with ticks
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double v = spec.y_min + (spec.y_max - spec.y_min) * i / 5.0;
        double y = ys(v);
        svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_f(v, 1)
            << "</text>\n";
    }
    int n_xticks = std::min(10, x_max - x_min);
    for (int i = 0; i <= n_xticks; ++i) {
        int year = x_min + static_cast<int>(std::lround(double(x_max - x_min) * i / n_xticks));
        double x = xs(year);
        svg << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x << "\" y2=\""
            << mt + ph + 4 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << year
            << "</text>\n";
    }

    // confidence bands first so the lines draw on top
    for (const auto& [key, s] : series) {
        if (s.years.empty()) continue;
        svg << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < s.years.size(); ++i)
            svg << fmt_f(xs(s.years[i]), 2) << ',' << fmt_f(ys(s.hi[i]), 2) << ' ';
        for (std::size_t i = s.years.size(); i-- > 0;)
            svg << fmt_f(xs(s.years[i]), 2) << ',' << fmt_f(ys(s.lo[i]), 2) << ' ';
        svg << "\"/>\n";
    }
    for (const auto& [key, s] : series) {
        if (s.years.empty()) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.years.size(); ++i)
            svg << fmt_f(xs(s.years[i]), 2) << ',' << fmt_f(ys(s.mean[i]), 2) << ' ';
        svg << "\"/>\n";
    }

    // legend
    double lx = ml + pw - 90, ly = mt + 10;
    for (const auto& [key, s] : series) {
        if (s.years.empty()) continue;
        svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        ly += 18;
    }

    svg << "</svg>\n";
    return svg.str();
}

} // namespace modechoice
