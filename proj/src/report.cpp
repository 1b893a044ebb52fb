#include "admitcast/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace admitcast {

using nlohmann::json;

double round_significant(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return std::strtod(buf, nullptr);
}

namespace {

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_significant(v);
}

std::string cell(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string bound_kind(const PValueBound& p) {
  switch (p.kind) {
    case PValueBound::Kind::exact: return "exact";
    case PValueBound::Kind::at_most: return "at_most";
    case PValueBound::Kind::at_least: return "at_least";
  }
  return "exact";
}

std::string spec_text(const SarimaSpec& s) {
  std::ostringstream os;
  os << s.p << ',' << s.d << ',' << s.q << ',' << s.P << ',' << s.D << ',' << s.Q << ',' << s.period << ','
     << (s.include_drift ? 1 : 0);
  return os.str();
}

json diagnostics_json(const Diagnostics& d) {
  json tests = json::array();
  for (const auto& t : d.tests) {
    tests.push_back({{"test", t.test_name},
                     {"statistic", number(t.statistic)},
                     {"p_value", number(t.p_value.value)},
                     {"p_value_kind", bound_kind(t.p_value)},
                     {"null_hypothesis", t.null_hypothesis},
                     {"rejected_at_05", t.rejected_at_05}});
  }
  return {{"subject", d.subject}, {"tests", tests}};
}

json comparison_json(const ComparisonReport& c) {
  json rows = json::array();
  for (const auto& r : c.rows) {
    rows.push_back({{"method", r.method},
                    {"model", r.detail},
                    {"sum_of_error", number(r.errors.sum_of_error)},
                    {"mae", number(r.errors.mae)},
                    {"rmse", number(r.errors.rmse)}});
  }
  json out = {{"rows", rows}, {"winner", c.winner}};
  if (c.selection) {
    json candidates = json::array();
    for (const auto& s : c.selection->ranked) {
      candidates.push_back({{"model", s.spec.label()},
                            {"aic", number(s.aic)},
                            {"bic", number(s.bic)},
                            {"converged", s.converged},
                            {"note", s.note}});
    }
    out["selection"] = {{"criterion", c.selection->criterion == Criterion::aic ? "aic" : "bic"},
                        {"d", c.selection->d},
                        {"D", c.selection->D},
                        {"candidates", candidates}};
  }
  return out;
}

json model_json(const SarimaFit& f) {
  json coefs = json::array();
  const Eigen::VectorXd c = f.params.coefficients(f.spec);
  for (std::size_t i = 0; i < f.labels.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    coefs.push_back({{"label", f.labels[i]}, {"estimate", number(c[k])}, {"std_error", number(f.std_errors[k])}});
  }
  return {{"label", f.spec.label()},
          {"orders", {{"p", f.spec.p}, {"d", f.spec.d}, {"q", f.spec.q}, {"P", f.spec.P}, {"D", f.spec.D},
                      {"Q", f.spec.Q}, {"period", f.spec.period}, {"drift", f.spec.include_drift}}},
          {"coefficients", coefs},
          {"sigma2", number(f.params.sigma2)},
          {"loglik", number(f.loglik)},
          {"aic", number(f.aic)},
          {"bic", number(f.bic)},
          {"k", f.k()},
          {"n_effective", f.n_effective},
          {"converged", f.converged}};
}

json forecast_json(const ForecastSection& s) {
  const ForecastResult& f = s.result;
  json levels = json::array();
  for (double l : f.levels) levels.push_back(number(l));
  json steps = json::array();
  for (Eigen::Index i = 0; i < f.point.size(); ++i) {
    json lower = json::array(), upper = json::array();
    for (Eigen::Index j = 0; j < f.lower.cols(); ++j) {
      lower.push_back(number(f.lower(i, j)));
      upper.push_back(number(f.upper(i, j)));
    }
    steps.push_back({{"step", i + 1},
                     {"index", s.first_index + i},
                     {"point", number(f.point[i])},
                     {"sigma", number(f.sigma_h[i])},
                     {"lower", lower},
                     {"upper", upper}});
  }
  return {{"horizon", f.point.size()}, {"levels", levels}, {"steps", steps}};
}

}  // namespace

std::string report_json(const RunReport& report) {
  const Provenance& p = report.provenance;
  json doc = {{"schema_version", 1},
              {"provenance",
               {{"input_sha256", p.input_sha256},
                {"seed", p.seed},
                {"version", p.version},
                {"period", p.period},
                {"train_length", p.train_length},
                {"test_length", p.test_length}}}};
  if (report.diagnostics) doc["diagnostics"] = diagnostics_json(*report.diagnostics);
  if (report.comparison) doc["comparison"] = comparison_json(*report.comparison);
  if (report.model) doc["model"] = model_json(*report.model);
  if (report.forecast) doc["forecast"] = forecast_json(*report.forecast);
  return doc.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> report_csv(const RunReport& report) {
  std::vector<std::pair<std::string, std::string>> out;
  if (report.diagnostics) {
    std::ostringstream os;
    os << "subject,test,statistic,p_value,p_value_kind,null_hypothesis,rejected_at_05\n";
    for (const auto& t : report.diagnostics->tests)
      os << quote(report.diagnostics->subject) << ',' << quote(t.test_name) << ',' << cell(t.statistic) << ','
         << cell(t.p_value.value) << ',' << bound_kind(t.p_value) << ',' << quote(t.null_hypothesis) << ','
         << (t.rejected_at_05 ? "true" : "false") << '\n';
    out.emplace_back("diagnostics", os.str());
  }
  if (report.comparison) {
    std::ostringstream os;
    os << "rank,method,model,sum_of_error,mae,rmse\n";
    int rank = 1;
    for (const auto& r : report.comparison->rows)
      os << rank++ << ',' << quote(r.method) << ',' << quote(r.detail) << ',' << cell(r.errors.sum_of_error) << ','
         << cell(r.errors.mae) << ',' << cell(r.errors.rmse) << '\n';
    out.emplace_back("comparison", os.str());
    if (report.comparison->selection) {
      std::ostringstream cs;
      cs << "rank,model,orders,aic,bic,converged,note\n";
      rank = 1;
      for (const auto& s : report.comparison->selection->ranked)
        cs << rank++ << ',' << quote(s.spec.label()) << ',' << quote(spec_text(s.spec)) << ',' << cell(s.aic) << ','
           << cell(s.bic) << ',' << (s.converged ? "true" : "false") << ',' << quote(s.note) << '\n';
      out.emplace_back("candidates", cs.str());
    }
  }
  if (report.model) {
    const SarimaFit& f = *report.model;
    const Eigen::VectorXd c = f.params.coefficients(f.spec);
    std::ostringstream os;
    os << "model,label,estimate,std_error\n";
    for (std::size_t i = 0; i < f.labels.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      os << quote(f.spec.label()) << ',' << f.labels[i] << ',' << cell(c[k]) << ',' << cell(f.std_errors[k]) << '\n';
    }
    os << quote(f.spec.label()) << ",sigma2," << cell(f.params.sigma2) << ",\n";
    os << quote(f.spec.label()) << ",loglik," << cell(f.loglik) << ",\n";
    os << quote(f.spec.label()) << ",aic," << cell(f.aic) << ",\n";
    os << quote(f.spec.label()) << ",bic," << cell(f.bic) << ",\n";
    out.emplace_back("model", os.str());
  }
  if (report.forecast) {
    const ForecastResult& f = report.forecast->result;
    std::ostringstream os;
    os << "step,index,point,sigma";
    for (double l : f.levels) os << ",lower_" << cell(100 * l) << ",upper_" << cell(100 * l);
    os << '\n';
    for (Eigen::Index i = 0; i < f.point.size(); ++i) {
      os << i + 1 << ',' << report.forecast->first_index + i << ',' << cell(f.point[i]) << ',' << cell(f.sigma_h[i]);
      for (Eigen::Index j = 0; j < f.lower.cols(); ++j) os << ',' << cell(f.lower(i, j)) << ',' << cell(f.upper(i, j));
      os << '\n';
    }
    out.emplace_back("forecast", os.str());
  }
  return out;
}

std::vector<std::filesystem::path> emit_report(const RunReport& report, ReportFormat format,
                                               const std::filesystem::path& path) {
  auto write = [](const std::filesystem::path& target, const std::string& text) {
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + target.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + target.string());
  };
  std::vector<std::filesystem::path> written;
  if (format == ReportFormat::json) {
    write(path, report_json(report));
    written.push_back(path);
    return written;
  }
  const std::filesystem::path stem = path.parent_path() / path.stem();
  for (const auto& [section, text] : report_csv(report)) {
    std::filesystem::path target = stem;
    target += "_" + section + ".csv";
    write(target, text);
    written.push_back(target);
  }
  return written;
}

}  // namespace admitcast
