#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "jmrel/dataset.hpp"
#include "jmrel/errors.hpp"

using namespace jmrel;

namespace {

std::vector<double> values(const FailureDataset& d) { return {d.intervals().begin(), d.intervals().end()}; }

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("bundled datasets have the published lengths and values") {
    const auto ntds = builtin_dataset("ntds");
    CHECK(ntds.size() == 31);
    CHECK(ntds.x(1) == 9);
    CHECK(ntds.x(2) == 12);
    CHECK(ntds.x(3) == 11);
    CHECK(ntds.unit() == "day");

    CHECK(builtin_dataset("musa1").size() == 17);

    const auto musa2 = builtin_dataset("musa2");
    CHECK(values(musa2) ==
          std::vector<double>{10, 9, 13, 11, 15, 12, 18, 15, 22, 25, 19, 30, 32, 25, 40});

    const auto musa3 = builtin_dataset("musa3");
    CHECK(musa3.size() == 163);
    CHECK(musa3.x(1) == 320);
    CHECK(musa3.x(163) == 17280);
    CHECK(musa3.unit() == "second");
}

TEST_CASE("unknown dataset names list the valid ones") {
    try {
        builtin_dataset("musa9");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        for (const auto& name : builtin_dataset_names()) CHECK(msg.find(name) != std::string::npos);
    }
}

TEST_CASE("plain files parse in order with comments and a unit header") {
    std::istringstream in("# unit: hour\n9\n12\n\n# note\n11\n");
    const auto d = parse_dataset(in, DatasetFormat::plain, "f");
    CHECK(values(d) == std::vector<double>{9, 12, 11});
    CHECK(d.unit() == "hour");

    std::istringstream bare("9\n12\n11\n");
    CHECK(parse_dataset(bare, DatasetFormat::plain, "g").unit() == "unspecified");
}

TEST_CASE("nonpositive or malformed values report their line") {
    std::istringstream zero("4\n0\n");
    try {
        parse_dataset(zero, DatasetFormat::plain, "z");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream junk("4\nabc\n");
    CHECK_THROWS_AS(parse_dataset(junk, DatasetFormat::plain, "j"), ParseError);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(parse_dataset(empty, DatasetFormat::plain, "e"), ParseError);
}

TEST_CASE("csv files read the interval column") {
    std::istringstream in("interval\n1.5\n2.5\n");
    CHECK(values(parse_dataset(in, DatasetFormat::csv, "c")) == std::vector<double>{1.5, 2.5});
    std::istringstream wide("index,interval\n1,3\n2,4\n");
    CHECK(values(parse_dataset(wide, DatasetFormat::csv, "w")) == std::vector<double>{3, 4});
    std::istringstream missing("value\n1\n");
    CHECK_THROWS_AS(parse_dataset(missing, DatasetFormat::csv, "m"), ParseError);
}

TEST_CASE("load_dataset picks the format from the extension") {
    const auto plain = temp_file("jmrel_plain.txt", "9\n12\n11\n");
    const auto csv = temp_file("jmrel_data.csv", "interval\n1.5\n2.5\n");
    CHECK(format_for_path(plain) == DatasetFormat::plain);
    CHECK(format_for_path(csv) == DatasetFormat::csv);
    CHECK(values(load_dataset(plain, DatasetFormat::plain)) == std::vector<double>{9, 12, 11});
    CHECK(values(load_dataset(csv, DatasetFormat::csv)) == std::vector<double>{1.5, 2.5});
    CHECK_THROWS(load_dataset(std::filesystem::temp_directory_path() / "jmrel_missing.txt",
                              DatasetFormat::plain));
}

TEST_CASE("prefix segments") {
    const auto ntds = builtin_dataset("ntds");
    const auto p26 = prefix(ntds, 26);
    CHECK(p26.size() == 26);
    CHECK(p26.x(25) == 2);
    CHECK(p26.x(26) == 1);
    CHECK(p26.unit() == ntds.unit());
    CHECK(p26.name() == "ntds:26");
    CHECK(values(prefix(ntds, 3)) == std::vector<double>{9, 12, 11});
    CHECK(prefix(ntds, 31) == ntds);
    CHECK_THROWS_AS(prefix(ntds, 0), std::out_of_range);
    CHECK_THROWS_AS(prefix(ntds, 32), std::out_of_range);
}

TEST_CASE("property: nested prefixes compose") {
    const auto musa3 = builtin_dataset("musa3");
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<std::size_t> pick_k(1, musa3.size());
        const std::size_t k = pick_k(rng);
        std::uniform_int_distribution<std::size_t> pick_j(1, k);
        const std::size_t j = pick_j(rng);
        CHECK(prefix(prefix(musa3, k), j) == prefix(musa3, j));
    }
}

TEST_CASE("property: write then parse round-trips short decimals exactly") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> mantissa(1, 99'999'999);
    std::uniform_int_distribution<int> digits(0, 6);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> xs;
        for (int j = 0; j < 20; ++j) {
            std::ostringstream txt;
            const int d = digits(rng);
            txt << mantissa(rng) << "e-" << d;
            xs.push_back(std::stod(txt.str()));
        }
        const FailureDataset original("rt", xs, "second");
        std::stringstream buf;
        write_dataset(buf, original);
        const auto back = parse_dataset(buf, DatasetFormat::plain, "rt");
        CHECK(values(back) == xs);
        CHECK(back.unit() == "second");
    }
}
