#include "fuelcast/ingest.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace fuelcast::ingest {
namespace {

const char* kHeader = "Date,PlantID,State,Source,Quantity,AvgHeatContent,FuelCost\n";

const char* kTableOne =
    "Date,PlantID,State,Source,Quantity,AvgHeatContent,FuelCost\n"
    "201301,127,TX,SUB,476,17.7,1.10\n"
    "201301,127,TX,SUB,28866,17,2.29\n"
    "201301,127,TX,SUB,43824,16.8,2.08\n"
    "201301,127,TX,SUB,86254,17,2.12\n"
    "201301,127,TX,SUB,43256,17,2.10\n";

std::vector<FuelRecord> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_records(in);
}

MonthSeries hub_from(const std::string& text, bool daily) {
    std::istringstream in(text);
    return load_hub_prices(in, daily);
}

TEST(ParseRecords, ReadsTableRow) {
    auto recs = parse(std::string(kHeader) + "201301,127,TX,SUB,476,17.7,1.10\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0], (FuelRecord{YearMonth(2013, 1), 127, "TX", "SUB", 476, 17.7, 1.10}));
}

TEST(ParseRecords, HeaderOnlyIsEmpty) { EXPECT_TRUE(parse(kHeader).empty()); }

TEST(ParseRecords, NegativeQuantityIsMalformed) {
    EXPECT_THROW(parse(std::string(kHeader) + "201301,127,TX,SUB,-5,17.7,1.10\n"), MalformedRow);
}

TEST(ParseRecords, MalformedRowCarriesLineNumber) {
    try {
        parse(std::string(kHeader) + "201301,127,TX,SUB,1,1,1\n201302,127,TX,SUB,1,abc,1\n");
        FAIL();
    } catch (const MalformedRow& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(ParseRecords, MissingColumnIsReported) {
    EXPECT_THROW(parse("Date,PlantID,State,Source,Quantity,FuelCost\n"), MissingColumn);
}

TEST(ParseRecords, ShortRowIsMalformed) { EXPECT_THROW(parse(std::string(kHeader) + "201301,127,TX\n"), MalformedRow); }

TEST(ParseRecords, ColumnsMatchedByNameInAnyOrder) {
    auto recs = parse("FuelCost,Source,State,PlantID,Date,AvgHeatContent,Quantity\n2.5,NG,TX,9,201607,1.03,100\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].date, YearMonth(2016, 7));
    EXPECT_EQ(recs[0].plant_id, 9);
    EXPECT_DOUBLE_EQ(recs[0].fuel_cost, 2.5);
}

TEST(Aggregate, TableOneRowsGiveTableTwoValue) {
    const auto agg = aggregate_fuel_cost(parse(kTableOne));
    ASSERT_EQ(agg.size(), 1u);
    const double v = agg.begin()->second;
    EXPECT_NEAR(v, 2.13, 0.005);
    const double cost = 476 * 17.7 * 1.10 + 28866 * 17 * 2.29 + 43824 * 16.8 * 2.08 + 86254 * 17 * 2.12 +
                        43256 * 17 * 2.10;
    const double heat = 476 * 17.7 + 28866 * 17 + 43824 * 16.8 + 86254 * 17 + 43256 * 17;
    EXPECT_NEAR(v, cost / heat, 1e-12);
}

TEST(Aggregate, SingleRecord) {
    const auto agg = aggregate_fuel_cost({{YearMonth(2013, 1), 1, "TX", "NG", 1, 1, 3.50}});
    EXPECT_DOUBLE_EQ(agg.begin()->second, 3.50);
}

TEST(Aggregate, HeatWeightedMean) {
    const auto agg = aggregate_fuel_cost(
        {{YearMonth(2013, 1), 1, "TX", "NG", 1, 1, 2.0}, {YearMonth(2013, 1), 1, "TX", "NG", 3, 1, 4.0}});
    EXPECT_DOUBLE_EQ(agg.begin()->second, 3.5);
}

TEST(Aggregate, GroupsBySourceAndMonth) {
    const auto agg = aggregate_fuel_cost({{YearMonth(2013, 1), 1, "TX", "NG", 1, 1, 2.0},
                                          {YearMonth(2013, 1), 1, "TX", "SUB", 1, 1, 4.0},
                                          {YearMonth(2013, 2), 1, "TX", "NG", 1, 1, 5.0}});
    EXPECT_EQ(agg.size(), 3u);
    EXPECT_DOUBLE_EQ(agg.at({PlantKey{1, "TX", "NG"}, YearMonth(2013, 2)}), 5.0);
}

TEST(BuildSeries, GapsWhereNoAggregate) {
    const PlantKey k{1, "TX", "NG"};
    AggregateMap agg{{{k, YearMonth(2013, 1)}, 2.0}, {{k, YearMonth(2013, 3)}, 3.0}};
    auto s = build_plant_series(agg, k, {YearMonth(2013, 1), YearMonth(2013, 3)});
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0], 2.0);
    EXPECT_FALSE(s[1]);
    EXPECT_EQ(s[2], 3.0);
}

TEST(BuildSeries, SingleMonth) {
    const PlantKey k{1, "TX", "NG"};
    AggregateMap agg{{{k, YearMonth(2013, 1)}, 2.0}};
    auto s = build_plant_series(agg, k, {YearMonth(2013, 1), YearMonth(2013, 1)});
    EXPECT_EQ(s.size(), 1u);
    EXPECT_TRUE(s.complete());
}

TEST(BuildSeries, TableTwoPlant127) {
    const PlantKey k{127, "TX", "SUB"};
    const double vals[] = {2.13, 2.10, 2.09, 2.10, 2.13};
    AggregateMap agg;
    for (int i = 0; i < 5; ++i) agg[{k, YearMonth(2013, 1 + i)}] = vals[i];
    agg[{PlantKey{128, "TX", "SUB"}, YearMonth(2013, 2)}] = 9.0;
    auto s = build_plant_series(agg, k, {YearMonth(2013, 1), YearMonth(2013, 5)});
    EXPECT_EQ(s.dense(), std::vector<double>(std::begin(vals), std::end(vals)));
}

TEST(Interpolate, SingleGapMidpoint) {
    MonthSeries s(YearMonth(2013, 1), {2.0, std::nullopt, 3.0});
    auto r = interpolate_single_gaps(s);
    EXPECT_EQ(r.dense(), (std::vector<double>{2.0, 2.5, 3.0}));
}

TEST(Interpolate, DoubleGapUnchanged) {
    MonthSeries s(YearMonth(2013, 1), {2.0, std::nullopt, std::nullopt, 3.0});
    EXPECT_EQ(interpolate_single_gaps(s), s);
}

TEST(Interpolate, BoundaryGapUnchanged) {
    MonthSeries s(YearMonth(2013, 1), {std::nullopt, 2.0, 3.0});
    EXPECT_EQ(interpolate_single_gaps(s), s);
}

TEST(FilterPlants, PolicyOutcomes) {
    SeriesMap m;
    m.emplace(PlantKey{1, "TX", "NG"}, MonthSeries::from_values(YearMonth(2013, 1), {1, 2, 3, 4, 5, 6}));
    m.emplace(PlantKey{2, "TX", "NG"},
              MonthSeries(YearMonth(2013, 1), {1, std::nullopt, 3, std::nullopt, 5, std::nullopt, 7}));
    m.emplace(PlantKey{3, "TX", "NG"}, MonthSeries(YearMonth(2013, 1), {1, std::nullopt, 3, 4}));
    m.emplace(PlantKey{4, "TX", "NG"}, MonthSeries(YearMonth(2013, 1), {1, std::nullopt, std::nullopt, 4}));
    m.emplace(PlantKey{5, "TX", "NG"}, MonthSeries(YearMonth(2013, 1), {1, 2, 3, std::nullopt}));
    auto r = filter_plants(m, InclusionPolicy{2, 1});
    ASSERT_EQ(r.retained.size(), 2u);
    EXPECT_TRUE(r.retained.at(PlantKey{1, "TX", "NG"}).complete());
    EXPECT_EQ(r.retained.at(PlantKey{3, "TX", "NG"}).dense(), (std::vector<double>{1, 2, 3, 4}));
    ASSERT_EQ(r.drops.size(), 3u);
    EXPECT_EQ(r.drops[0].plant.plant_id, 2);
    EXPECT_EQ(r.drops[1].plant.plant_id, 4);
    EXPECT_EQ(r.drops[2].plant.plant_id, 5);
}

TEST(HubPrices, MonthlyRows) {
    auto h = hub_from("Date,Price\n201607,2.97\n201608,2.98\n", false);
    EXPECT_EQ(h.start(), YearMonth(2016, 7));
    EXPECT_EQ(h.dense(), (std::vector<double>{2.97, 2.98}));
}

TEST(HubPrices, DailyRowsAveraged) {
    auto h = hub_from("Date,Price\n2016-07-01,3.0\n2016-07-02,3.0\n2016-07-05,3.0\n", true);
    EXPECT_EQ(h.dense(), std::vector<double>{3.0});
    auto g = hub_from("Date,Price\n2016-07-01,2.0\n2016-07-02,4.0\n", true);
    EXPECT_EQ(g.dense(), std::vector<double>{3.0});
}

TEST(HubPrices, DuplicateMonthWithoutDailyFlagIsMalformed) {
    EXPECT_THROW(hub_from("Date,Price\n201607,2.0\n201607,4.0\n", false), MalformedRow);
}

TEST(HubPrices, MissingMonthIsIncomplete) {
    EXPECT_THROW(hub_from("Date,Price\n201607,2.0\n201609,4.0\n", false), IncompleteHub);
}

}  // namespace
}  // namespace fuelcast::ingest
