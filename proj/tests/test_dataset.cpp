#include <doctest.h>

#include <sstream>

#include "gpfc/dataset.hpp"
#include "synthetic.hpp"

using namespace gpfc;

namespace {

std::string data_path(const char* name) { return std::string(GPFC_TEST_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("long layout fixture") {
    const auto ds = load_csv(data_path("long_two_series.csv"), {});
    REQUIRE(ds.series.size() == 2);
    CHECK(ds.series[0].name == "a");
    CHECK(ds.series[0].series.values == std::vector<double>{10, 11.25, 12.5, 14, 13});
    CHECK(ds.series[1].series.values == std::vector<double>{-1, -2, -3.5, -4, -5.25});
    CHECK(ds.series[0].test_length == 18);
    CHECK(ds.series[1].series.frequency == Frequency::monthly());
}

TEST_CASE("malformed value reports its line") {
    try {
        load_csv(data_path("bad_value.csv"), {});
        FAIL("expected a parse error");
    } catch (const CsvError& e) {
        CHECK(e.line() == 7);
        CHECK(std::string(e.what()).find("line 7") != std::string::npos);
    }
}

TEST_CASE("long layout errors") {
    std::istringstream dup("id,step,value\na,0,1\na,0,2\n");
    CHECK_THROWS_AS(parse_csv(dup, {}), CsvError);
    std::istringstream gap("id,step,value\na,0,1\na,2,2\n");
    CHECK_THROWS_AS(parse_csv(gap, {}), CsvError);
    std::istringstream fields("id,step,value\na,0\n");
    CHECK_THROWS_AS(parse_csv(fields, {}), CsvError);
    std::istringstream step("id,step,value\na,1.5,3\n");
    CHECK_THROWS_AS(parse_csv(step, {}), CsvError);
    std::istringstream inf("id,step,value\na,0,inf\n");
    CHECK_THROWS_AS(parse_csv(inf, {}), CsvError);
    CHECK_THROWS(load_csv("/nonexistent/file.csv", {}));
}

TEST_CASE("wide layout") {
    std::istringstream in("x,y\n1,2\n3,4\n5,\n");
    CsvOptions opts;
    opts.layout = CsvLayout::Wide;
    opts.frequency = Frequency::quarterly();
    const auto ds = parse_csv(in, opts);
    REQUIRE(ds.series.size() == 2);
    CHECK(ds.series[0].series.values == std::vector<double>{1, 3, 5});
    CHECK(ds.series[1].series.values == std::vector<double>{2, 4});
    CHECK(ds.series[0].test_length == 8);

    std::istringstream gap("x,y\n1,\n3,4\n");
    CHECK_THROWS_AS(parse_csv(gap, opts), CsvError);
    std::istringstream dup_names("x,x\n1,2\n");
    CHECK_THROWS_AS(parse_csv(dup_names, opts), std::invalid_argument);
    std::istringstream no_header("1,2\n3,4\n");
    opts.header = false;
    const auto nh = parse_csv(no_header, opts);
    CHECK(nh.series[1].name == "series2");
    CHECK(nh.series[1].series.values == std::vector<double>{2, 4});
}

TEST_CASE("write then load reproduces the dataset") {
    auto ds = synthetic::trend_season_dataset(4, 5, 37);
    ds.series[2].series.values.resize(20);
    std::stringstream ss;
    write_csv(ss, ds);
    CsvOptions opts;
    opts.test_length = 18;
    CHECK(parse_csv(ss, opts) == ds);
}
