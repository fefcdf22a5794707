#pragma once

// RFC-4180 CSV emission with locale-independent, round-trippable numbers.

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace squid_horizon::csv {

/// Shortest round-trip scientific notation with '.' decimal ("nan"/"inf" spelled out).
[[nodiscard]] std::string format_number(double value);

/// Quotes a field when it contains a comma, quote, CR or LF.
[[nodiscard]] std::string escape(std::string_view field);

class Writer {
public:
    Writer(std::ostream& out, std::vector<std::string> header);

    Writer& field(double value);
    Writer& field(std::size_t value);
    Writer& field(std::string_view value);
    void end_row();

    [[nodiscard]] std::size_t columns() const { return n_columns_; }

private:
    void separator();

    std::ostream& out_;
    std::size_t n_columns_;
    std::size_t in_row_ = 0;
};

}  // namespace squid_horizon::csv
