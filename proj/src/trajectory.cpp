#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "epinet/episim.hpp"

namespace epinet {

namespace {

DegreeMeasure to_measure(const std::vector<long>& h) {
  DegreeMeasure::Map m;
  for (std::size_t k = 0; k < h.size(); ++k)
    if (h[k] > 0) m[static_cast<int>(k)] = static_cast<double>(h[k]);
  return DegreeMeasure(std::move(m));
}

const char* kind_name(EventKind k) {
  switch (k) {
    case EventKind::infection: return "infection";
    case EventKind::activation: return "activation";
    case EventKind::removal: return "removal";
  }
  return "?";
}

}  // namespace

MeasureTrajectory track_measures(const EventLog& log, const Graph& g, const std::vector<double>& sample_times) {
  if (!std::is_sorted(sample_times.begin(), sample_times.end()))
    throw std::invalid_argument("sample times must be sorted");
  const int n = g.vertex_count();
  if (n != log.population) throw std::invalid_argument("event log and graph disagree on N");
  Adjacency adj(g);
  enum : unsigned char { S, I, R };
  std::vector<unsigned char> st(n, S);
  std::vector<int> sdeg(n, 0);  // susceptible neighbours, for I and R
  int kmax = 0;
  for (int u = 0; u < n; ++u) kmax = std::max(kmax, adj.degree(u));
  std::vector<long> hs(kmax + 1, 0), hi(kmax + 1, 0), hr(kmax + 1, 0);
  long long NS = 0, NIS = 0, NRS = 0;
  long cs = n, ci = 0, cr = 0;
  for (int u = 0; u < n; ++u) {
    ++hs[adj.degree(u)];
    NS += adj.degree(u);
  }

  auto infect = [&](int v) {
    --hs[adj.degree(v)];
    NS -= adj.degree(v);
    st[v] = I;
    --cs;
    ++ci;
    int own = 0;
    for (const int* w = adj.begin(v); w != adj.end(v); ++w) {
      if (*w == v) continue;
      if (st[*w] == S) {
        ++own;
      } else {
        auto& h = st[*w] == I ? hi : hr;
        --h[sdeg[*w]];
        --sdeg[*w];
        ++h[sdeg[*w]];
        (st[*w] == I ? NIS : NRS) -= 1;
      }
    }
    sdeg[v] = own;
    ++hi[own];
    NIS += own;
  };
  auto remove = [&](int v) {
    --hi[sdeg[v]];
    ++hr[sdeg[v]];
    NIS -= sdeg[v];
    NRS += sdeg[v];
    st[v] = R;
    --ci;
    ++cr;
  };

  MeasureTrajectory tr;
  auto record = [&](double ts, bool clamped) {
    tr.times.push_back(ts);
    tr.mu_s.push_back(to_measure(hs));
    tr.mu_is.push_back(to_measure(hi));
    tr.mu_rs.push_back(to_measure(hr));
    tr.S.push_back(cs);
    tr.I.push_back(ci);
    tr.R.push_back(cr);
    tr.NS.push_back(NS);
    tr.NIS.push_back(NIS);
    tr.NRS.push_back(NRS);
    tr.clamped.push_back(clamped);
  };

  for (int u : log.index_cases) infect(u);
  std::size_t next = 0;
  for (const auto& e : log.events) {
    while (next < sample_times.size() && sample_times[next] < e.time) record(sample_times[next++], false);
    if (e.kind == EventKind::infection) infect(e.actor);
    else if (e.kind == EventKind::removal) remove(e.actor);
  }
  while (next < sample_times.size()) {
    double ts = sample_times[next++];
    record(ts, ts > log.horizon);
  }
  return tr;
}

void write_event_log(std::ostream& out, const EventLog& log) {
  out << "time,kind,actor,infector\n";
  out << std::setprecision(17);
  for (int u : log.index_cases) out << 0.0 << ",index," << u << ",\n";
  for (const auto& e : log.events) {
    out << e.time << ',' << kind_name(e.kind) << ',' << e.actor << ',';
    if (e.kind == EventKind::infection && e.infector >= 0) out << e.infector;
    out << '\n';
  }
}

void write_trajectory(std::ostream& out, const MeasureTrajectory& tr) {
  out << "t,S,I,R,NS,NIS,NRS\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < tr.size(); ++i)
    out << tr.times[i] << ',' << tr.S[i] << ',' << tr.I[i] << ',' << tr.R[i] << ',' << tr.NS[i] << ','
        << tr.NIS[i] << ',' << tr.NRS[i] << '\n';
}

void write_measure_snapshots(std::ostream& out, const MeasureTrajectory& tr) {
  out << std::setprecision(17);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out << "# t=" << tr.times[i] << " muS\n";
    write_measure(out, tr.mu_s[i]);
    out << "# t=" << tr.times[i] << " muIS\n";
    write_measure(out, tr.mu_is[i]);
    out << "# t=" << tr.times[i] << " muRS\n";
    write_measure(out, tr.mu_rs[i]);
  }
}

}  // namespace epinet
