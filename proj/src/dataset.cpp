#include "admitcast/dataset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "admitcast/errors.hpp"

namespace admitcast {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  std::string out(s.substr(first, last - first + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  throw DataError(path.string() + ":" + std::to_string(line) + ": " + what);
}

int parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer");
  return v;
}

}  // namespace

std::chrono::sys_days parse_iso_date(const std::string& text) {
  using namespace std::chrono;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw std::invalid_argument("expected an ISO-8601 date (YYYY-MM-DD), got '" + text + "'");
  const std::string_view v(text);
  const year_month_day ymd{year{parse_int(v.substr(0, 4))}, month{static_cast<unsigned>(parse_int(v.substr(5, 2)))},
                           day{static_cast<unsigned>(parse_int(v.substr(8, 2)))}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date '" + text + "'");
  return sys_days{ymd};
}

std::string format_iso_date(std::chrono::sys_days day) {
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& options) {
  if (options.period < 1) throw std::invalid_argument("seasonal period must be >= 1");
  if (options.value_column.empty()) throw std::invalid_argument("value column name must not be empty");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string raw = buffer.str();

  Dataset out;
  out.sha256 = sha256_hex(raw);
  std::string_view text(raw);
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::string> lines;
  for (std::size_t start = 0; start < text.size();) {
    const auto nl = text.find('\n', start);
    lines.emplace_back(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  auto blank = [](const std::string& l) { return trim(l).empty(); };
  std::size_t header_at = 0;
  while (header_at < lines.size() && blank(lines[header_at])) ++header_at;
  if (header_at == lines.size()) throw DataError(path.string() + ": empty input, no header or data rows");

  const std::vector<std::string> header = split_fields(lines[header_at]);
  auto column = [&](const std::string& name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) fail(path, header_at + 1, "missing column '" + name + "' in header");
    return it - header.begin();
  };
  const bool dated = !options.date_column.empty();
  const std::ptrdiff_t date_col = dated ? column(options.date_column) : -1;
  const std::ptrdiff_t value_col = column(options.value_column);

  std::vector<double> values;
  for (std::size_t i = header_at + 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (blank(lines[i])) continue;
    const std::vector<std::string> fields = split_fields(lines[i]);
    if (fields.size() != header.size())
      fail(path, line_no,
           "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));

    const std::string& cell = fields[static_cast<std::size_t>(value_col)];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
      fail(path, line_no, "admissions value '" + cell + "' is not a number");
    if (v < 0.0) fail(path, line_no, "negative admissions count " + cell);

    if (dated) {
      std::chrono::sys_days day;
      try {
        day = parse_iso_date(fields[static_cast<std::size_t>(date_col)]);
      } catch (const std::invalid_argument& e) {
        fail(path, line_no, e.what());
      }
      if (!out.dates.empty()) {
        const auto step = (day - out.dates.back()).count();
        if (step != 7)
          fail(path, line_no,
               "date gap: expected " + format_iso_date(out.dates.back() + std::chrono::days{7}) + ", found " +
                   format_iso_date(day) + " (" + std::to_string(step) + " days after the previous row)");
      }
      out.dates.push_back(day);
    }
    values.push_back(v);
  }
  if (values.empty()) throw DataError(path.string() + ": empty input, header but no data rows");

  const Eigen::VectorXd series = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  out.series = TimeSeries(series, options.period, dated ? out.dates.front() : std::chrono::sys_days{});
  return out;
}

TimeSeries load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  return load_dataset(path, options).series;
}

std::pair<TimeSeries, TimeSeries> split(const TimeSeries& series, Eigen::Index train_len) {
  if (train_len < 1 || train_len >= series.size())
    throw std::invalid_argument("train length must lie in [1, " + std::to_string(series.size() - 1) + "], got " +
                                std::to_string(train_len));
  const auto test_start = series.start_date + std::chrono::days{7 * train_len};
  return {TimeSeries(series.values.head(train_len), series.period, series.start_date),
          TimeSeries(series.values.tail(series.size() - train_len), series.period, test_start)};
}

}  // namespace admitcast
