#include "squid_horizon/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "squid_horizon/errors.hpp"

namespace squid_horizon::csv {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific);
    return std::string(buf, res.ptr);
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

Writer::Writer(std::ostream& out, std::vector<std::string> header) : out_(out), n_columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << escape(header[i]);
    }
    out_ << "\r\n";
}

void Writer::separator() {
    if (in_row_ >= n_columns_) raise(ErrorCode::InvalidArgument, "CSV row has more fields than the header");
    if (in_row_ > 0) out_ << ',';
    ++in_row_;
}

Writer& Writer::field(double value) {
    separator();
    out_ << format_number(value);
    return *this;
}

Writer& Writer::field(std::size_t value) {
    separator();
    out_ << value;
    return *this;
}

Writer& Writer::field(std::string_view value) {
    separator();
    out_ << escape(value);
    return *this;
}

void Writer::end_row() {
    if (in_row_ != n_columns_) raise(ErrorCode::InvalidArgument, "CSV row has fewer fields than the header");
    out_ << "\r\n";
    in_row_ = 0;
}

}  // namespace squid_horizon::csv
