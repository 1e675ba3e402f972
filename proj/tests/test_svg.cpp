#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <sstream>

#include "tsf/arima.hpp"
#include "tsf/decomposition.hpp"
#include "tsf/fixture.hpp"
#include "tsf/svg.hpp"

using namespace tsf;
namespace pt = boost::property_tree;

namespace {

pt::ptree parse(const std::string& text) {
    std::istringstream in(text);
    pt::ptree tree;
    pt::read_xml(in, tree);
    return tree;
}

int count_children(const pt::ptree& node, const std::string& name) {
    int n = 0;
    for (const auto& child : node) n += child.first == name;
    return n;
}

}  // namespace

TEST(Svg, LinePanelsAreWellFormed) {
    const auto h = healthcare_fixture();
    const auto dec = decompose(h);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < h.size(); ++i) labels.push_back(h.stamp_at(i).str());
    std::vector<svg::Panel> panels{
        {"observed & <raw>", {{"", "#000", {h.values().begin(), h.values().end()}}}},
        {"trend", {{"", "#000", dec.trend}}},
        {"seasonal", {{"", "#000", {dec.seasonal.begin(), dec.seasonal.end()}}}},
        {"random", {{"", "#000", dec.random}}},
    };
    const auto text = svg::line_panels(panels, labels);
    const auto tree = parse(text);
    EXPECT_EQ(count_children(tree.get_child("svg"), "g"), 4);
    EXPECT_EQ(svg::line_panels(panels, labels), text);
}

TEST(Svg, CorrelogramHasBandLines) {
    const auto train = healthcare_fixture().head({2015, 12});
    const auto w = difference(train.values(), 1);
    const auto a = acf(w, 24);
    const auto text = svg::correlogram_bars({{"ACF", a, 1.96 / std::sqrt(71.0)}});
    const auto tree = parse(text);
    int bands = 0;
    for (const auto& child : tree.get_child("svg.g")) {
        if (child.first == "line" && child.second.get<std::string>("<xmlattr>.class", "") == "band") ++bands;
    }
    EXPECT_EQ(bands, 2);
}
