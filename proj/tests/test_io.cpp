#include <cmath>
#include <limits>
#include <regex>

#include "doctest.h"
#include "transit/errors.hpp"
#include "transit/json_io.hpp"
#include "transit/plot.hpp"
#include "transit/scenarios.hpp"

using namespace transit;

TEST_CASE("floats are printed with 17 significant digits and round trip")
{
    nlohmann::json j{{"a", 0.1}, {"b", std::vector<double>{1.0 / 3, -2.5e-300}}};
    std::string s = dump_json(j);
    CHECK(s.find("0.10000000000000001") != std::string::npos);
    nlohmann::json back = parse_json(s);
    CHECK(back["a"].get<double>() == 0.1);
    CHECK(back["b"][0].get<double>() == 1.0 / 3);
    CHECK(back["b"][1].get<double>() == -2.5e-300);
    CHECK(s.back() == '\n');
}

TEST_CASE("non-finite floats become null")
{
    nlohmann::json j{{"x", std::numeric_limits<double>::infinity()}, {"y", std::nan("")}};
    nlohmann::json back = parse_json(dump_json(j));
    CHECK(back["x"].is_null());
    CHECK(back["y"].is_null());
}

TEST_CASE("malformed JSON is an input error")
{
    CHECK_THROWS_AS(parse_json("{\"a\": "), InputError);
    CHECK_THROWS_AS(read_json_file("/nonexistent/path.json"), InputError);
    CHECK_THROWS_AS(transition_report_from_json(nlohmann::json::parse("{}")), InputError);
    CHECK_THROWS_AS(transition_report_from_json(nlohmann::json::parse("[{\"t\": 1}]")), InputError);
}

TEST_CASE("transition report round trip")
{
    TransitionReport r = torus_scenario({-0.1, 0.0, 0.1}).report;
    std::string a = dump_json(to_json(r));
    CHECK(dump_json(to_json(r)) == a);
    TransitionReport back = transition_report_from_json(parse_json(a));
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back[i].t == r[i].t);
        CHECK(back[i].kind == r[i].kind);
        CHECK(back[i].value == r[i].value);
        CHECK(back[i].tag.s == r[i].tag.s);
        // images are renormalized on load
        for (std::size_t k = 0; k < 2; ++k) CHECK(group_distance(back[i].rep.images[k], r[i].rep.images[k]) < 1e-14);
    }
}

TEST_CASE("SVG panels and determinism")
{
    TransitionReport r = torus_scenario(t_grid(-0.1, 0.1, 5)).report;
    std::string svg = render_svg(r);
    CHECK(svg == render_svg(r));
    CHECK(svg.find("width=\"1280\"") != std::string::npos);
    std::regex panel("<svg x=\"\\d+\" y=\"0\" width=\"256\" height=\"256\" viewBox=\"0 0 512 512\">");
    auto n = std::distance(std::sregex_iterator(svg.begin(), svg.end(), panel), std::sregex_iterator());
    CHECK(n == 5);
    CHECK(svg.find("HP") != std::string::npos);
}

TEST_CASE("empty report still draws axes")
{
    std::string svg = render_svg({});
    CHECK(svg.find("width=\"256\"") != std::string::npos);
    CHECK(svg.find("<line") != std::string::npos);
    CHECK(svg.find("<polygon") == std::string::npos);
}

namespace {

// vertical extent of the polygons of one panel, in viewBox units
double vertical_extent(const std::string& panel)
{
    std::regex pt("([0-9.]+),([0-9.]+)");
    double lo = 1e9, hi = -1e9;
    for (auto it = std::sregex_iterator(panel.begin(), panel.end(), pt); it != std::sregex_iterator(); ++it) {
        double y = std::stod((*it)[2]);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    return hi - lo;
}

} // namespace

TEST_CASE("rescaled panels keep their vertical extent as t shrinks")
{
    // unrescaled, the collapsing coordinate would shrink by 10x between these panels
    double e1 = vertical_extent(render_svg(torus_scenario({0.1}).report));
    double e2 = vertical_extent(render_svg(torus_scenario({0.01}).report));
    double e0 = vertical_extent(render_svg(torus_scenario({0.0}).report));
    CHECK(e0 > 10.0);
    CHECK(e2 / e1 > 0.5);
    CHECK(e2 / e1 < 2.0);
    CHECK(e2 / e0 == doctest::Approx(1.0).epsilon(0.2));
}
