#include "report.hpp"

#include <charconv>
#include <ctime>

namespace morse::cli {

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_number(std::size_t x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_cell(const CriticalPower& p) { return p.is_finite() ? format_number(p.value()) : std::string(); }

std::string csv_cell(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

Json power_json(const CriticalPower& p) {
    if (p.is_finite())
        return p.value();
    return "infinity";
}

std::string to_csv(const SweepTable& table) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(table.header);
    for (const auto& row : table.rows)
        line(row);
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace morse::cli
