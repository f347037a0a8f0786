#include "jmrel/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "jmrel/errors.hpp"

namespace jmrel {

namespace {

struct BuiltinSpec {
    std::string_view name;
    std::string_view unit;
    std::string_view source;
    std::vector<double> values;
};

// Naval Tactical Data System, development + testing phases (31 of 34 errors).
const std::vector<double> kNtds = {9, 12, 11, 4,  7, 2, 5,  8,  5,  7, 1,  6,  1,  9,  4,  1,
                                   3, 3,  6,  1,  11, 33, 7, 91, 2, 1, 87, 47, 12, 9, 135};

const std::vector<double> kMusa1 = {932, 3103, 661, 197, 1476, 155, 1358, 288, 1169,
                                    1061, 142, 494, 660, 209, 361, 688, 1046};

const std::vector<double> kMusa2 = {10, 9, 13, 11, 15, 12, 18, 15, 22, 25, 19, 30, 32, 25, 40};

const std::vector<double> kMusa3 = {
    320,    1439,   9000,   2880,   5700,   21800,  26800,  113540,  112137,  660,
    2700,   28793,  2173,   7263,   10865,  4230,   8460,   14805,   11844,   5361,
    6553,   6499,   3124,   51323,  17010,  1890,   5400,   62313,   24826,   26355,
    363,    13989,  15058,  32377,  41632,  4160,   82040,  13189,   3426,    5833,
    640,    640,    2880,   110,    22080,  60654,  52163,  12546,   784,     10193,
    7841,   31365,  24313,  298890, 1280,   22099,  19150,  2611,    39170,   55794,
    42632,  267600, 87074,  149606, 14400,  34560,  39600,  334395,  296015,  177395,
    214622, 156400, 166800, 10800,  267000, 34513,  7680,   37667,   11100,   187200,
    18000,  178200, 144000, 639200, 86400,  288000, 320,    57600,   28800,   18000,
    88640,  432000, 4160,   3200,   42800,  43600,  10560,  115200,  86400,   57600,
    28800,  432000, 345600, 115200, 44494,  10506,  177240, 241487,  143028,  273564,
    189391, 172800, 21600,  64800,  302400, 752188, 86400,  100800,  19440,   115200,
    64800,  3600,   230400, 583200, 259200, 183600, 3600,   144000,  14400,   86400,
    110100, 28800,  43200,  57600,  468000, 950400, 400400, 883800,  273600,  432000,
    864000, 202600, 203400, 277680, 105000, 580080, 4533960, 432000, 1411200, 172800,
    86400,  1123200, 1555200, 777600, 1296000, 1872000, 335600, 921600, 1036800, 1728000,
    777600, 57600,  17280};

const std::array<BuiltinSpec, 4>& builtins() {
    static const std::array<BuiltinSpec, 4> specs = {{
        {"ntds", "day", "Naval Tactical Data System", kNtds},
        {"musa1", "second", "Musa data set I", kMusa1},
        {"musa2", "second", "Musa data set II", kMusa2},
        {"musa3", "second", "Musa data set III", kMusa3},
    }};
    return specs;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_interval(std::string_view token, std::size_t line) {
    token = trim(token);
    double value = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError("not a number: '" + std::string(token) + "'", line);
    }
    if (!std::isfinite(value) || value <= 0.0) {
        throw ParseError("interval must be positive and finite: '" + std::string(token) + "'",
                         line);
    }
    return value;
}

std::string strip_segment_suffix(const std::string& name) {
    const auto colon = name.rfind(':');
    if (colon == std::string::npos || colon + 1 == name.size()) return name;
    const bool digits = std::all_of(name.begin() + static_cast<std::ptrdiff_t>(colon) + 1,
                                    name.end(), [](char c) { return c >= '0' && c <= '9'; });
    return digits ? name.substr(0, colon) : name;
}

}  // namespace

FailureDataset::FailureDataset(std::string name, std::vector<double> intervals, std::string unit,
                               std::string source)
    : name_(std::move(name)),
      intervals_(std::move(intervals)),
      unit_(std::move(unit)),
      source_(std::move(source)) {
    if (intervals_.empty()) {
        throw std::invalid_argument("dataset '" + name_ + "' has no intervals");
    }
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const double v = intervals_[i];
        if (!std::isfinite(v) || v <= 0.0) {
            throw std::invalid_argument("dataset '" + name_ + "': interval " +
                                        std::to_string(i + 1) + " is not strictly positive");
        }
    }
}

std::vector<std::string> builtin_dataset_names() {
    std::vector<std::string> names;
    for (const auto& b : builtins()) names.emplace_back(b.name);
    return names;
}

FailureDataset builtin_dataset(std::string_view name) {
    for (const auto& b : builtins()) {
        if (b.name == name) {
            return FailureDataset(std::string(b.name), b.values, std::string(b.unit),
                                  std::string(b.source));
        }
    }
    std::string valid;
    for (const auto& b : builtins()) {
        if (!valid.empty()) valid += ", ";
        valid += b.name;
    }
    throw ParseError("unknown dataset '" + std::string(name) + "'; valid names: " + valid);
}

FailureDataset parse_dataset(std::istream& in, DatasetFormat format, std::string name) {
    std::vector<double> values;
    std::string unit = "unspecified";
    std::string raw;
    std::size_t line = 0;
    bool header_seen = false;
    std::size_t column = 0;

    while (std::getline(in, raw)) {
        ++line;
        const std::string_view text = trim(raw);
        if (text.empty()) continue;
        if (text.front() == '#') {
            const std::string_view body = trim(text.substr(1));
            constexpr std::string_view key = "unit:";
            if (body.substr(0, key.size()) == key) unit = std::string(trim(body.substr(key.size())));
            continue;
        }
        if (format == DatasetFormat::plain) {
            values.push_back(parse_interval(text, line));
            continue;
        }

        std::vector<std::string_view> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = text.find(',', start);
            cells.push_back(trim(text.substr(start, comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!header_seen) {
            auto it = std::find(cells.begin(), cells.end(), std::string_view("interval"));
            if (it == cells.end()) throw ParseError("csv header has no 'interval' column", line);
            column = static_cast<std::size_t>(it - cells.begin());
            header_seen = true;
            continue;
        }
        if (column >= cells.size()) throw ParseError("missing 'interval' cell", line);
        values.push_back(parse_interval(cells[column], line));
    }

    if (values.empty()) throw ParseError("dataset '" + name + "' contains no intervals");
    return FailureDataset(std::move(name), std::move(values), std::move(unit));
}

FailureDataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file '" + path.string() + "'");
    return parse_dataset(in, format, path.stem().string());
}

void write_dataset(std::ostream& out, const FailureDataset& data) {
    out << "# " << data.name() << "\n# unit: " << data.unit() << '\n';
    std::array<char, 64> buf{};
    for (double v : data.intervals()) {
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        out.write(buf.data(), ptr - buf.data());
        out << '\n';
    }
}

FailureDataset prefix(const FailureDataset& data, std::size_t k) {
    if (k < 1 || k > data.size()) {
        throw std::out_of_range("prefix length " + std::to_string(k) + " outside [1, " +
                                std::to_string(data.size()) + "]");
    }
    if (k == data.size()) return data;
    const auto xs = data.intervals();
    return FailureDataset(strip_segment_suffix(data.name()) + ":" + std::to_string(k),
                          std::vector<double>(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k)),
                          data.unit(), data.source());
}

DatasetFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? DatasetFormat::csv : DatasetFormat::plain;
}

}  // namespace jmrel
