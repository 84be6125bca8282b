#include "transit/plot.hpp"

#include <cmath>
#include <cstdio>

namespace transit {

namespace {

constexpr int kPanel = 256;
constexpr int kView = 512;
constexpr double kHexRadius = 0.2;
constexpr double kClip = 8.0;

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<Word> short_words(int ngen)
{
    std::vector<Word> out{{}};
    for (int g = -ngen; g <= ngen; ++g) {
        if (g == 0) continue;
        out.push_back({g});
        for (int h = -ngen; h <= ngen; ++h)
            if (h != 0 && h != -g) out.push_back({g, h});
    }
    return out;
}

// Hexagon vertices in the plane of the second and last coordinates.
std::vector<Eigen::VectorXd> base_polygon(int n)
{
    std::vector<Eigen::VectorXd> pts;
    for (int k = 0; k < 6; ++k) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
        p(0) = 1.0;
        p(1) = kHexRadius * std::cos(M_PI * k / 3);
        p(n - 1) = kHexRadius * std::sin(M_PI * k / 3);
        pts.push_back(p);
    }
    return pts;
}

std::string panel(const TransitionRow* row, int index)
{
    std::string s = "<svg x=\"" + std::to_string(index * kPanel) + "\" y=\"0\" width=\"" + std::to_string(kPanel) +
                    "\" height=\"" + std::to_string(kPanel) + "\" viewBox=\"0 0 " + std::to_string(kView) + " " +
                    std::to_string(kView) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"512\" height=\"512\" fill=\"white\" stroke=\"black\"/>\n";
    s += "<line x1=\"0\" y1=\"256\" x2=\"512\" y2=\"256\" stroke=\"gray\"/>\n";
    s += "<line x1=\"256\" y1=\"0\" x2=\"256\" y2=\"512\" stroke=\"gray\"/>\n";
    s += "<circle cx=\"256\" cy=\"256\" r=\"256\" fill=\"none\" stroke=\"gray\"/>\n";
    if (!row) return s + "</svg>\n";

    s += "<text x=\"8\" y=\"24\" font-size=\"20\">t=" + fmt("%.17g", row->t) + " " + classification(row->tag) +
         "</text>\n";
    const Representation& rep = row->rep;
    int n = rep.dim + 1;
    std::vector<Eigen::VectorXd> hex = base_polygon(n);
    for (const Word& w : short_words(int(rep.pres.generators.size()))) {
        Eigen::MatrixXd P = to_projective(evaluate_word(rep, w), rep.dim).m;
        if (row->t != 0.0) P = conjugate_by_rescaling({rep.dim, P}, row->t).m;
        std::string pts;
        bool ok = true;
        for (const Eigen::VectorXd& v : hex) {
            Eigen::VectorXd y = P * v;
            if (std::abs(y(0)) < 1e-12) {
                ok = false;
                break;
            }
            double u = y(1) / y(0), h = y(n - 1) / y(0);
            if (!(std::abs(u) <= kClip && std::abs(h) <= kClip)) {
                ok = false;
                break;
            }
            if (!pts.empty()) pts += " ";
            pts += fmt("%.6f", 256 + 256 * u) + "," + fmt("%.6f", 256 - 256 * h);
        }
        if (ok) s += "<polygon points=\"" + pts + "\" fill=\"none\" stroke=\"blue\"/>\n";
    }
    return s + "</svg>\n";
}

} // namespace

std::string render_svg(const TransitionReport& report)
{
    int panels = std::max<int>(1, int(report.size()));
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(panels * kPanel) + "\" height=\"" +
         std::to_string(kPanel) + "\">\n";
    if (report.empty()) s += panel(nullptr, 0);
    for (std::size_t i = 0; i < report.size(); ++i) s += panel(&report[i], int(i));
    return s + "</svg>\n";
}

} // namespace transit
