#include "sniep/report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "sniep/error.hpp"

namespace sniep {

using nlohmann::json;

ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  if (s == "table") return ReportFormat::Table;
  throw std::invalid_argument("unknown report format: " + s);
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kCsvHeader << '\n';
  const auto old = out.precision(17);
  for (const auto& r : records) {
    out << to_string(r.problem.kind) << ',' << r.problem.n << ','
        << r.problem.p << ',' << r.problem.scale << ',' << to_string(r.variant)
        << ',' << r.problem.seed << ',' << to_string(r.status) << ',' << r.ct
        << ',' << r.it << ',' << r.nf << ',' << r.ncg << ',' << r.res0 << ','
        << r.res << '\n';
  }
  out.precision(old);
}

namespace {

json to_json(const RunRecord& r) {
  json traj = json::array();
  for (const auto& [k, v] : r.trajectory) traj.push_back({k, v});
  return {
      {"problem",
       {{"kind", to_string(r.problem.kind)},
        {"n", r.problem.n},
        {"p", r.problem.p},
        {"scale", r.problem.scale},
        {"seed", r.problem.seed},
        {"spectrum", r.problem.spectrum}}},
      {"variant", to_string(r.variant)},
      {"CT", r.ct},
      {"IT", r.it},
      {"NF", r.nf},
      {"NCG", r.ncg},
      {"Res0", r.res0},
      {"Res", r.res},
      {"status", to_string(r.status)},
      {"trajectory", traj},
  };
}

double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN()
                     : j.get<double>();
}

RunRecord from_json(const json& j) {
  RunRecord r;
  const json& pj = j.at("problem");
  r.problem.kind = parse_problem_kind(pj.at("kind").get<std::string>());
  r.problem.n = pj.at("n").get<int>();
  r.problem.p = pj.at("p").get<int>();
  r.problem.scale = pj.at("scale").get<double>();
  r.problem.seed = pj.at("seed").get<std::uint64_t>();
  r.problem.spectrum = pj.at("spectrum").get<std::vector<double>>();
  r.variant = parse_variant(j.at("variant").get<std::string>());
  r.ct = j.at("CT").get<double>();
  r.it = j.at("IT").get<int>();
  r.nf = j.at("NF").get<int>();
  r.ncg = j.at("NCG").get<long>();
  r.res0 = number_or_nan(j.at("Res0"));
  r.res = number_or_nan(j.at("Res"));
  r.status = parse_status(j.at("status").get<std::string>());
  for (const auto& e : j.at("trajectory"))
    r.trajectory.emplace_back(e.at(0).get<int>(), number_or_nan(e.at(1)));
  return r;
}

template <typename T>
double median(std::vector<T> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? static_cast<double>(v[m])
                      : 0.5 * (static_cast<double>(v[m - 1]) + v[m]);
}

}  // namespace

void write_json(std::ostream& out, const std::vector<RunRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

std::vector<RunRecord> parse_json_records(const std::string& text) {
  const json arr = json::parse(text);
  std::vector<RunRecord> out;
  for (const auto& j : arr) out.push_back(from_json(j));
  return out;
}

void write_table(std::ostream& out, const std::vector<RunRecord>& records) {
  using Key = std::tuple<std::string, int, int, double, std::string>;
  std::map<Key, std::vector<const RunRecord*>> groups;
  std::vector<Key> order;
  for (const auto& r : records) {
    Key key{to_string(r.problem.kind), r.problem.n, r.problem.p,
            r.problem.scale, to_string(r.variant)};
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }

  out << std::left << std::setw(20) << "kind" << std::right << std::setw(6)
      << "n" << std::setw(6) << "p" << std::setw(7) << "scale" << std::setw(5)
      << "alg" << std::setw(6) << "runs" << std::setw(7) << "conv"
      << std::setw(11) << "CT" << std::setw(5) << "IT" << std::setw(5) << "NF"
      << std::setw(8) << "NCG" << std::setw(9) << "NCG/IT" << std::setw(11)
      << "Res0" << std::setw(11) << "Res" << '\n';
  for (const auto& key : order) {
    const auto& g = groups[key];
    std::vector<double> ct, res0, res;
    std::vector<int> it, nf;
    std::vector<long> ncg;
    std::vector<double> per_outer;
    int converged = 0;
    for (const RunRecord* r : g) {
      ct.push_back(r->ct);
      it.push_back(r->it);
      nf.push_back(r->nf);
      ncg.push_back(r->ncg);
      per_outer.push_back(r->mean_ncg_per_outer());
      res0.push_back(r->res0);
      res.push_back(r->res);
      if (r->status == SolveStatus::Converged) ++converged;
    }
    std::ostringstream conv;
    conv << converged << '/' << g.size();
    out << std::left << std::setw(20) << std::get<0>(key) << std::right
        << std::setw(6) << std::get<1>(key) << std::setw(6) << std::get<2>(key)
        << std::setw(7) << std::get<3>(key) << std::setw(5) << std::get<4>(key)
        << std::setw(6) << g.size() << std::setw(7) << conv.str()
        << std::setw(10) << std::fixed << std::setprecision(4) << median(ct)
        << 's' << std::setw(5) << std::setprecision(0) << median(it)
        << std::setw(5) << median(nf) << std::setw(8) << median(ncg)
        << std::setw(9) << std::setprecision(1) << median(per_outer)
        << std::scientific << std::setprecision(3) << std::setw(11)
        << median(res0) << std::setw(11) << median(res) << '\n';
    out << std::defaultfloat;
  }
}

void emit_report(std::ostream& out, const std::vector<RunRecord>& records,
                 ReportFormat format) {
  switch (format) {
    case ReportFormat::Csv: write_csv(out, records); break;
    case ReportFormat::Json: write_json(out, records); break;
    case ReportFormat::Table: write_table(out, records); break;
  }
}

void emit_report(const std::string& path, const std::vector<RunRecord>& records,
                 ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  emit_report(out, records, format);
  out.flush();
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_trajectory_csv(const std::string& path, const RunRecord& record) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "k,res_norm\n" << std::setprecision(17);
  for (const auto& [k, v] : record.trajectory) out << k << ',' << v << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace sniep
