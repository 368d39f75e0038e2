#include "rrd/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rrd/errors.hpp"

namespace rrd {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, int line, const std::string& field) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, field + ": cannot parse number '" + tok + "'");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

InstanceDoc parse_instance(std::istream& in) {
  InstanceDoc doc;
  std::vector<double> nominal;
  std::vector<std::vector<double>> rho_rows;
  bool has_nominal = false, has_radius = false, has_budget = false, has_rho = false;
  double radius = 0.0;

  std::string raw;
  int line_no = 0;
  int rho_pending = -1;  // rows of the matrix block still expected
  int rho_first_line = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);
    auto tk = tokens(line);
    if (tk.empty()) continue;

    if (rho_pending > 0) {
      std::vector<double> row;
      for (const auto& t : tk)
        row.push_back(parse_number(
            t, line_no,
            "rho row " + std::to_string(rho_rows.size())));
      if (!doc.repro_labels.empty() && row.size() != doc.repro_labels.size())
        throw ParseError(line_no, "rho row " + std::to_string(rho_rows.size()) +
                                      " has " + std::to_string(row.size()) +
                                      " entries, expected " +
                                      std::to_string(doc.repro_labels.size()));
      rho_rows.push_back(std::move(row));
      --rho_pending;
      continue;
    }

    const std::string& key = tk[0];
    if (key == "source" || key == "repro") {
      if (tk.size() < 2) throw ParseError(line_no, key + ": needs at least one label");
      auto& labels = (key == "source") ? doc.source_labels : doc.repro_labels;
      labels.assign(tk.begin() + 1, tk.end());
    } else if (key == "nominal") {
      nominal.clear();
      for (std::size_t i = 1; i < tk.size(); ++i)
        nominal.push_back(parse_number(tk[i], line_no, "nominal"));
      has_nominal = true;
    } else if (key == "radius") {
      if (tk.size() < 2) throw ParseError(line_no, "radius: missing value");
      radius = parse_number(tk[1], line_no, "radius");
      if (tk.size() >= 3) {
        if (tk[2] == "bits")
          radius *= std::log(2.0);
        else if (tk[2] != "nats")
          throw ParseError(line_no, "radius: unit must be 'nats' or 'bits'");
      }
      has_radius = true;
    } else if (key == "budget") {
      if (tk.size() < 2) throw ParseError(line_no, "budget: missing value");
      doc.instance.budget = parse_number(tk[1], line_no, "budget");
      has_budget = true;
    } else if (key == "rho") {
      if (doc.source_labels.empty())
        throw ParseError(line_no, "rho: source alphabet must be declared first");
      rho_pending = static_cast<int>(doc.source_labels.size());
      rho_first_line = line_no;
      has_rho = true;
    } else if (key == "tol") {
      if (tk.size() < 2) throw ParseError(line_no, "tol: missing value");
      doc.tol = parse_number(tk[1], line_no, "tol");
      doc.has_tol = true;
    } else if (key == "seed") {
      if (tk.size() < 2) throw ParseError(line_no, "seed: missing value");
      try {
        doc.seed = std::stoull(tk[1]);
      } catch (const std::exception&) {
        throw ParseError(line_no, "seed: cannot parse integer '" + tk[1] + "'");
      }
      doc.has_seed = true;
    } else {
      throw ParseError(line_no, "unknown field '" + key + "'");
    }
  }

  if (doc.source_labels.empty()) throw ParseError(line_no, "missing 'source' line");
  if (doc.repro_labels.empty()) throw ParseError(line_no, "missing 'repro' line");
  if (!has_nominal) throw ParseError(line_no, "missing 'nominal' line");
  if (!has_radius) throw ParseError(line_no, "missing 'radius' line");
  if (!has_budget) throw ParseError(line_no, "missing 'budget' line");
  if (!has_rho) throw ParseError(line_no, "missing 'rho' block");
  if (rho_pending > 0)
    throw ParseError(rho_first_line, "rho block ended after " +
                                         std::to_string(rho_rows.size()) +
                                         " rows, expected " +
                                         std::to_string(doc.source_labels.size()));
  if (nominal.size() != doc.source_labels.size())
    throw ParseError(line_no, "nominal has " + std::to_string(nominal.size()) +
                                  " entries, expected " +
                                  std::to_string(doc.source_labels.size()));

  std::size_t m = doc.source_labels.size(), n = doc.repro_labels.size();
  std::vector<double> flat;
  flat.reserve(m * n);
  for (std::size_t x = 0; x < m; ++x) {
    if (rho_rows[x].size() != n)
      throw ParseError(rho_first_line,
                       "rho row " + std::to_string(x) + " has " +
                           std::to_string(rho_rows[x].size()) +
                           " entries, expected " + std::to_string(n));
    for (double v : rho_rows[x]) flat.push_back(v);
  }

  doc.instance.source_size = m;
  doc.instance.repro_size = n;
  doc.instance.rho = DistortionMatrix(m, n, std::move(flat));
  doc.instance.nominal = validate_pmf(nominal, 1e-9);
  doc.instance.radius = radius;
  doc.instance.validate();
  return doc;
}

InstanceDoc parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file: " + path);
  return parse_instance(in);
}

void dump_instance(std::ostream& out, const InstanceDoc& doc) {
  out << "source";
  for (const auto& s : doc.source_labels) out << ' ' << s;
  out << "\nrepro";
  for (const auto& s : doc.repro_labels) out << ' ' << s;
  out << "\nnominal";
  for (std::size_t x = 0; x < doc.instance.nominal.size(); ++x)
    out << ' ' << fmt(doc.instance.nominal[x]);
  out << "\nradius " << fmt(doc.instance.radius) << " nats";
  out << "\nbudget " << fmt(doc.instance.budget);
  out << "\nrho\n";
  for (std::size_t x = 0; x < doc.instance.rho.rows(); ++x) {
    for (std::size_t y = 0; y < doc.instance.rho.cols(); ++y)
      out << (y ? " " : "") << fmt(doc.instance.rho(x, y));
    out << '\n';
  }
  if (doc.has_tol) out << "tol " << fmt(doc.tol) << '\n';
  if (doc.has_seed) out << "seed " << doc.seed << '\n';
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
  out << "D,rate_nats,slope_s,lambda,kl_achieved,worst_distortion\n";
  char buf[160];
  for (const auto& p : points) {
    double lam = std::isfinite(p.lambda) ? p.lambda : 0.0;
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  p.distortion, p.rate, p.slope, lam, p.kl, p.worst_distortion);
    out << buf;
  }
}

}  // namespace rrd
