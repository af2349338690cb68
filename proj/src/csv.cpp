#include "dwell/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dwell/error.hpp"

namespace dwell {

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::initializer_list<std::string_view> header)
    : out_(path)
    , path_(path)
{
    require(static_cast<bool>(out_), ErrorCode::Io, "cannot open " + path + " for writing");
    for (auto h : header) cell(h);
    end_row();
}

CsvWriter& CsvWriter::cell(std::string_view v)
{
    if (!first_) out_ << ',';
    out_ << v;
    first_ = false;
    return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(std::string_view(format_double(v))); }

CsvWriter& CsvWriter::cell(std::size_t v) { return cell(std::string_view(std::to_string(v))); }

void CsvWriter::end_row()
{
    out_ << '\n';
    first_ = true;
    require(static_cast<bool>(out_), ErrorCode::Io, "write to " + path_ + " failed");
}

void write_crossings(const std::string& path, std::span<const CrossingRecord> records)
{
    CsvWriter w(path, {"trajectory_id", "crossed", "t_cross"});
    for (std::size_t i = 0; i < records.size(); ++i) {
        w.cell(i).cell(std::size_t{records[i].crossed ? 1u : 0u}).cell(records[i].t_cross);
        w.end_row();
    }
}

void write_path(const std::string& path, const ClassicalPath& p)
{
    CsvWriter w(path, {"t", "x", "p"});
    for (const auto& s : p.samples) {
        w.cell(s.t).cell(s.x).cell(s.p);
        w.end_row();
    }
}

void write_spectrum(const std::string& path, const Eigen::VectorXd& energies)
{
    CsvWriter w(path, {"n", "E_n"});
    for (Eigen::Index n = 0; n < energies.size(); ++n) {
        w.cell(static_cast<std::size_t>(n)).cell(energies(n));
        w.end_row();
    }
}

void write_state(const std::string& path, const GridState& s)
{
    CsvWriter w(path, {"x", "re_psi", "im_psi"});
    for (std::size_t j = 0; j < s.grid.size(); ++j) {
        const cplx v = s.psi(static_cast<Eigen::Index>(j));
        w.cell(s.grid.x(j)).cell(v.real()).cell(v.imag());
        w.end_row();
    }
}

GridState read_state(const std::string& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::Io, path + " is empty");
    require(line.rfind("x,re_psi,im_psi", 0) == 0, ErrorCode::Io, path + " lacks the x,re_psi,im_psi header");
    std::vector<double> xs;
    std::vector<cplx> amp;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b, c;
        require(std::getline(ss, a, ',') && std::getline(ss, b, ',') && std::getline(ss, c), ErrorCode::Io,
                "malformed row in " + path);
        xs.push_back(std::strtod(a.c_str(), nullptr));
        amp.emplace_back(std::strtod(b.c_str(), nullptr), std::strtod(c.c_str(), nullptr));
    }
    require(xs.size() >= 64, ErrorCode::Io, path + " has too few rows for a grid");
    const Grid g(-xs.front(), xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j)
        require(std::abs(xs[j] - g.x(j)) <= 1e-9 * g.half_width(), ErrorCode::Io, path + " x column is not a uniform grid");
    GridState s{g, Eigen::Map<const Eigen::VectorXcd>(amp.data(), static_cast<Eigen::Index>(amp.size()))};
    return s;
}

void write_closed_run(const std::string& path, const ClosedRun& run)
{
    CsvWriter w(path, {"t", "x_expect", "p_expect", "p2_expect", "energy", "norm"});
    for (const auto& s : run.samples) {
        w.cell(s.t).cell(s.x_expect).cell(s.p_expect).cell(s.p2_expect).cell(s.energy).cell(s.norm);
        w.end_row();
    }
}

void write_sse(const std::string& path, const SSETrajectory& tr)
{
    CsvWriter w(path, {"t", "x_expect", "p_expect", "norm_residual"});
    for (const auto& s : tr.samples) {
        w.cell(s.t).cell(s.x_expect).cell(s.p_expect).cell(s.norm_residual);
        w.end_row();
    }
}

void write_lindblad(const std::string& path, const LindbladRun& run)
{
    CsvWriter w(path, {"t", "x_expect", "var_x", "fidelity_gibbs", "trace_residual", "min_eig"});
    for (const auto& s : run.samples) {
        w.cell(s.t).cell(s.x_expect).cell(s.var_x).cell(s.fidelity_gibbs).cell(s.trace_residual).cell(s.min_eig);
        w.end_row();
    }
}

void write_wigner(const std::string& path, const WignerField& f)
{
    CsvWriter w(path, {"x", "p", "w"});
    for (Eigen::Index i = 0; i < f.x.size(); ++i) {
        for (Eigen::Index j = 0; j < f.p.size(); ++j) {
            w.cell(f.x(i)).cell(f.p(j)).cell(f.w(i, j));
            w.end_row();
        }
    }
}

void write_gaussian_report(const std::string& path, std::span<const LatticeRow> rows)
{
    CsvWriter w(path, {"T", "gamma", "omega", "branch", "l_p", "h_xp", "residual_GT", "residual_GF"});
    for (const auto& r : rows) {
        w.cell(r.temperature).cell(r.gamma).cell(r.omega).cell(std::string_view(r.branch)).cell(r.l_p).cell(r.h_xp)
            .cell(r.residual_gt).cell(r.residual_gf);
        w.end_row();
    }
}

void write_rate_table(const std::string& path, const RateTable& table)
{
    CsvWriter w(path, {"model", "preset", "T", "gamma", "rate", "sem", "crossing_fraction", "n"});
    for (const auto& c : table.cells) {
        w.cell(to_string(table.model)).cell(std::string_view(table.preset)).cell(c.temperature).cell(c.gamma)
            .cell(c.estimate.rate).cell(c.estimate.rate_sem).cell(c.estimate.crossing_fraction).cell(c.estimate.n);
        w.end_row();
    }
}

void write_density_diagonal(const std::string& path, const DensityMatrix& rho, const Eigen::VectorXd& energies)
{
    CsvWriter w(path, {"n", "E_n", "population"});
    for (Eigen::Index n = 0; n < energies.size() && n < rho.rho.rows(); ++n) {
        w.cell(static_cast<std::size_t>(n)).cell(energies(n)).cell(rho.rho(n, n).real());
        w.end_row();
    }
}

} // namespace dwell
