#include "charts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "common.hpp"
#include "csv.hpp"

namespace leakage {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct PointData {
    double mu = 0, alpha = 0;
    double cap_wind = 0, cap_solar = 0, cap_coal = 0, cap_gas = 0;
    double conventional_share = 0;
    double lcoe = 0;
};

struct Store {
    std::vector<double> mus, alphas;  // sorted unique
    std::map<std::pair<double, double>, PointData> points;
};

Store load_store(const std::filesystem::path& dir) {
    csv::Table t = csv::read_file(dir / "summary.csv");
    int c_mu = t.column("mu"), c_alpha = t.column("alpha"), c_status = t.column("status");
    int c_w = t.column("cap_wind_mw"), c_s = t.column("cap_solar_mw");
    int c_c = t.column("cap_coal_mw"), c_g = t.column("cap_gas_mw");
    int c_share = t.column("conventional_share"), c_lcoe = t.column("total_lcoe_mu_per_mwh");
    if (c_mu < 0 || c_alpha < 0 || c_status < 0 || c_w < 0 || c_s < 0 || c_c < 0 || c_g < 0 ||
        c_share < 0 || c_lcoe < 0)
        throw DataError("charts: summary.csv misses expected columns");

    Store store;
    std::set<double> mus, alphas;
    for (const auto& row : t.rows) {
        if (row[std::size_t(c_status)] != "optimal") continue;
        PointData p;
        auto get = [&](int col) {
            double v;
            if (!csv::parse_double(row[std::size_t(col)], v))
                throw DataError("charts: bad number in summary.csv");
            return v;
        };
        p.mu = get(c_mu);
        p.alpha = get(c_alpha);
        p.cap_wind = get(c_w);
        p.cap_solar = get(c_s);
        p.cap_coal = get(c_c);
        p.cap_gas = get(c_g);
        p.conventional_share = get(c_share);
        p.lcoe = get(c_lcoe);
        mus.insert(p.mu);
        alphas.insert(p.alpha);
        store.points[{p.mu, p.alpha}] = p;
    }
    if (store.points.empty()) throw DataError("charts: store holds no optimal results");
    store.mus.assign(mus.begin(), mus.end());
    store.alphas.assign(alphas.begin(), alphas.end());
    return store;
}

// Minimal line-plot canvas.
struct Plot {
    double x0, y0, width, height;  // drawing area in svg coordinates
    double xmin, xmax, ymin, ymax;
    std::string body;

    double sx(double x) const {
        double span = xmax - xmin;
        if (span <= 0) return x0 + width / 2;
        return x0 + (x - xmin) / span * width;
    }
    double sy(double y) const {
        double span = ymax - ymin;
        if (span <= 0) return y0 + height / 2;
        return y0 + height - (y - ymin) / span * height;
    }

    void frame(const std::string& title, const std::string& xlabel, const std::string& ylabel) {
        body += "<rect x='" + num(x0) + "' y='" + num(y0) + "' width='" + num(width) +
                "' height='" + num(height) + "' fill='none' stroke='#444' stroke-width='1'/>\n";
        body += "<text x='" + num(x0 + width / 2) + "' y='" + num(y0 - 8) +
                "' text-anchor='middle' font-size='13'>" + title + "</text>\n";
        body += "<text x='" + num(x0 + width / 2) + "' y='" + num(y0 + height + 28) +
                "' text-anchor='middle' font-size='11'>" + xlabel + "</text>\n";
        body += "<text x='" + num(x0 - 42) + "' y='" + num(y0 + height / 2) +
                "' text-anchor='middle' font-size='11' transform='rotate(-90 " + num(x0 - 42) +
                " " + num(y0 + height / 2) + ")'>" + ylabel + "</text>\n";
        // min/max ticks
        body += "<text x='" + num(x0) + "' y='" + num(y0 + height + 14) +
                "' text-anchor='middle' font-size='10'>" + csv::format_double(xmin) + "</text>\n";
        body += "<text x='" + num(x0 + width) + "' y='" + num(y0 + height + 14) +
                "' text-anchor='middle' font-size='10'>" + csv::format_double(xmax) + "</text>\n";
        body += "<text x='" + num(x0 - 4) + "' y='" + num(y0 + height + 3) +
                "' text-anchor='end' font-size='10'>" + csv::format_double(ymin) + "</text>\n";
        body += "<text x='" + num(x0 - 4) + "' y='" + num(y0 + 3) +
                "' text-anchor='end' font-size='10'>" + csv::format_double(ymax) + "</text>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  bool dotted) {
        if (pts.empty()) return;
        if (pts.size() == 1) {
            body += "<circle cx='" + num(sx(pts[0].first)) + "' cy='" + num(sy(pts[0].second)) +
                    "' r='2.5' fill='" + color + "'/>\n";
            return;
        }
        body += "<polyline fill='none' stroke='" + color + "' stroke-width='1.4'";
        if (dotted) body += " stroke-dasharray='4 3'";
        body += " points='";
        for (const auto& [x, y] : pts) body += num(sx(x)) + "," + num(sy(y)) + " ";
        body += "'/>\n";
    }
};

std::string svg_document(double width, double height, const std::string& body) {
    std::string s = "<svg xmlns='http://www.w3.org/2000/svg' width='" + num(width) +
                    "' height='" + num(height) + "' viewBox='0 0 " + num(width) + " " +
                    num(height) + "'>\n";
    s += "<rect width='100%' height='100%' fill='white'/>\n";
    s += body;
    s += "</svg>\n";
    return s;
}

// Curves over mu, one line per alpha; alpha below the split renders solid,
// above it dotted.
void alpha_curves(Plot& plot, const Store& store, double alpha_split,
                  double (*value)(const PointData&), const std::string& color) {
    for (double alpha : store.alphas) {
        std::vector<std::pair<double, double>> pts;
        for (double mu : store.mus) {
            auto it = store.points.find({mu, alpha});
            if (it != store.points.end()) pts.push_back({mu, value(it->second)});
        }
        plot.polyline(pts, color, alpha >= alpha_split);
    }
}

std::string lerp_color(double f) {
    f = std::clamp(f, 0.0, 1.0);
    // dark blue -> light -> dark red
    int r = int(std::lround(40 + f * (200 - 40)));
    int g = int(std::lround(60 + (f < 0.5 ? f : 1.0 - f) * 2 * 120));
    int b = int(std::lround(200 - f * (200 - 40)));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

void render_charts(const std::filesystem::path& dir) {
    Store store = load_store(dir);
    const double alpha_split = 1.5;  // curves at or above render dotted

    double mu_lo = store.mus.front(), mu_hi = store.mus.back();

    // --- capacity curves, one panel per carrier ---
    {
        struct Panel {
            const char* title;
            const char* color;
            double (*value)(const PointData&);
        };
        const Panel panels[4] = {
            {"wind", "#2a9d3a", [](const PointData& p) { return p.cap_wind / 1000.0; }},
            {"solar PV", "#d8b400", [](const PointData& p) { return p.cap_solar / 1000.0; }},
            {"coal", "#222222", [](const PointData& p) { return p.cap_coal / 1000.0; }},
            {"gas", "#d23b2e", [](const PointData& p) { return p.cap_gas / 1000.0; }},
        };
        std::string body;
        for (int k = 0; k < 4; ++k) {
            double ymax = 0;
            for (const auto& [key, p] : store.points) {
                (void)key;
                ymax = std::max(ymax, panels[k].value(p));
            }
            Plot plot{70.0 + (k % 2) * 330.0, 40.0 + (k / 2) * 280.0, 250, 200,
                      mu_lo, mu_hi, 0.0, ymax > 0 ? ymax * 1.05 : 1.0, ""};
            plot.frame(panels[k].title, "base carbon price [mu/t]", "capacity [GW]");
            alpha_curves(plot, store, alpha_split, panels[k].value, panels[k].color);
            body += plot.body;
        }
        csv::write_file_atomic(dir / "capacity_curves.svg", svg_document(700, 600, body));
    }

    // --- conventional share ---
    {
        Plot plot{70, 40, 520, 340, mu_lo, mu_hi, 0.0, 1.0, ""};
        plot.frame("conventional share of generation", "base carbon price [mu/t]", "share");
        alpha_curves(plot, store, alpha_split,
                     [](const PointData& p) { return p.conventional_share; }, "#333333");
        csv::write_file_atomic(dir / "decarbonization.svg", svg_document(650, 430, plot.body));
    }

    // --- LCOE heat map over the grid ---
    {
        double lcoe_lo = std::numeric_limits<double>::infinity(), lcoe_hi = 0;
        for (const auto& [key, p] : store.points) {
            (void)key;
            lcoe_lo = std::min(lcoe_lo, p.lcoe);
            lcoe_hi = std::max(lcoe_hi, p.lcoe);
        }
        const double x0 = 70, y0 = 40, width = 520, height = 340;
        double cw = width / double(store.mus.size());
        double ch = height / double(store.alphas.size());
        std::string body;

        // cells + field classification by conventional share
        struct Field {
            double sum_x = 0, sum_y = 0;
            int count = 0;
        };
        Field fields[3];  // 0 conventional, 1 renewable, 2 leakage equilibrium
        for (std::size_t ai = 0; ai < store.alphas.size(); ++ai) {
            for (std::size_t mi = 0; mi < store.mus.size(); ++mi) {
                auto it = store.points.find({store.mus[mi], store.alphas[ai]});
                if (it == store.points.end()) continue;
                double f = lcoe_hi > lcoe_lo ? (it->second.lcoe - lcoe_lo) / (lcoe_hi - lcoe_lo)
                                             : 0.5;
                double cx = x0 + double(mi) * cw;
                double cy = y0 + height - double(ai + 1) * ch;
                body += "<rect x='" + num(cx) + "' y='" + num(cy) + "' width='" + num(cw) +
                        "' height='" + num(ch) + "' fill='" + lerp_color(f) + "'/>\n";
                int cls = it->second.conventional_share >= 0.3    ? 0
                          : it->second.conventional_share <= 0.05 ? 1
                                                                  : 2;
                fields[cls].sum_x += cx + cw / 2;
                fields[cls].sum_y += cy + ch / 2;
                fields[cls].count += 1;
            }
        }
        body += "<rect x='" + num(x0) + "' y='" + num(y0) + "' width='" + num(width) +
                "' height='" + num(height) + "' fill='none' stroke='#444'/>\n";
        body += "<text x='" + num(x0 + width / 2) + "' y='" + num(y0 - 8) +
                "' text-anchor='middle' font-size='13'>LCOE [mu/MWh], " + num(lcoe_lo) +
                " (blue) to " + num(lcoe_hi) + " (red)</text>\n";
        body += "<text x='" + num(x0 + width / 2) + "' y='" + num(y0 + height + 28) +
                "' text-anchor='middle' font-size='11'>base carbon price [mu/t], " +
                csv::format_double(mu_lo) + " to " + csv::format_double(mu_hi) + "</text>\n";
        body += "<text x='" + num(x0 - 42) + "' y='" + num(y0 + height / 2) +
                "' text-anchor='middle' font-size='11' transform='rotate(-90 " + num(x0 - 42) +
                " " + num(y0 + height / 2) + ")'>alpha, " + csv::format_double(store.alphas.front()) +
                " to " + csv::format_double(store.alphas.back()) + "</text>\n";

        // label the three regimes only when all of them are present
        if (fields[0].count > 0 && fields[1].count > 0 && fields[2].count > 0) {
            const char* labels[3] = {"conventional", "renewable", "leakage equilibrium"};
            for (int k = 0; k < 3; ++k) {
                double lx = fields[k].sum_x / fields[k].count;
                double ly = fields[k].sum_y / fields[k].count;
                body += "<text x='" + num(lx) + "' y='" + num(ly) +
                        "' text-anchor='middle' font-size='12' fill='white' stroke='black' "
                        "stroke-width='0.4'>" +
                        labels[k] + "</text>\n";
            }
        }
        csv::write_file_atomic(dir / "lcoe_map.svg", svg_document(650, 430, body));
    }
}

}  // namespace leakage
