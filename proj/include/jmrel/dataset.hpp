#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jmrel {

/// Ordered failure time intervals x_1..x_n. Index i (1-based) is the failure
/// number; every interval is strictly positive.
class FailureDataset {
public:
    FailureDataset(std::string name, std::vector<double> intervals,
                   std::string unit = "unspecified", std::string source = {});

    const std::string& name() const noexcept { return name_; }
    const std::string& unit() const noexcept { return unit_; }
    const std::string& source() const noexcept { return source_; }
    std::span<const double> intervals() const noexcept { return intervals_; }
    std::size_t size() const noexcept { return intervals_.size(); }

    /// 1-based access, x_i.
    double x(std::size_t i) const { return intervals_.at(i - 1); }

    bool operator==(const FailureDataset&) const = default;

private:
    std::string name_;
    std::vector<double> intervals_;
    std::string unit_;
    std::string source_;
};

enum class DatasetFormat { plain, csv };

std::vector<std::string> builtin_dataset_names();

/// One of the four bundled sets: ntds, musa1, musa2, musa3.
FailureDataset builtin_dataset(std::string_view name);

FailureDataset load_dataset(const std::filesystem::path& path, DatasetFormat format);
FailureDataset parse_dataset(std::istream& in, DatasetFormat format, std::string name);

/// Plain format with a `# unit:` header; shortest round-trip decimal form.
void write_dataset(std::ostream& out, const FailureDataset& data);

/// First k intervals. The name gets a ":k" segment suffix; a full-length
/// prefix returns the dataset unchanged.
FailureDataset prefix(const FailureDataset& data, std::size_t k);

/// Infers the format from the file extension (.csv -> csv, else plain).
DatasetFormat format_for_path(const std::filesystem::path& path);

}  // namespace jmrel
