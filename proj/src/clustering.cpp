#include "bessplan/clustering.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <random>

#include "bessplan/error.hpp"

namespace bessplan {

namespace {

using Matrix = Eigen::MatrixXd;

Matrix stack_days(const std::vector<Profile>& days) {
  if (days.size() < 2) throw DegeneracyError("k-means needs at least 2 days");
  const Index n = days.front().size();
  if (n == 0 || n != days.front().samples_per_day())
    throw ValidationError("k-means inputs must be single-day profiles");
  Matrix x(n, static_cast<Index>(days.size()));
  for (std::size_t j = 0; j < days.size(); ++j) {
    if (days[j].size() != n || days[j].step_minutes != days.front().step_minutes)
      throw AlignmentError("k-means inputs have mismatched lengths or steps");
    x.col(static_cast<Index>(j)) = days[j].values;
  }
  return x;
}

// Picks among exact ties using the seed.
Index pick_tied(const std::vector<Index>& tied, std::mt19937_64& rng) {
  if (tied.size() == 1) return tied.front();
  return tied[rng() % tied.size()];
}

Index argmax_with_ties(const Vector& score, std::mt19937_64& rng) {
  const double best = score.maxCoeff();
  std::vector<Index> tied;
  for (Index i = 0; i < score.size(); ++i)
    if (score[i] == best) tied.push_back(i);
  return pick_tied(tied, rng);
}

// Squared distance of every column to `c`.
Vector sq_dist(const Matrix& x, const Vector& c) { return (x.colwise() - c).colwise().squaredNorm(); }

bool lex_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

Index ClusterResult::count(Level l) const {
  return std::count(assignments.begin(), assignments.end(), l);
}

ClusterResult kmeans_two(const std::vector<Profile>& days, std::uint64_t seed,
                         const KMeansOptions& opts) {
  const Matrix x = stack_days(days);
  const Index n = x.cols();
  std::mt19937_64 rng(seed);

  Matrix c(x.rows(), 2);
  if (opts.initial_centroids) {
    c.col(0) = opts.initial_centroids->first;
    c.col(1) = opts.initial_centroids->second;
  } else {
    const Index first = argmax_with_ties(x.colwise().squaredNorm().transpose(), rng);
    c.col(0) = x.col(first);
    const Vector d0 = sq_dist(x, c.col(0));
    if (d0.maxCoeff() == 0) throw DegeneracyError("fewer than 2 distinct daily profiles");
    c.col(1) = x.col(argmax_with_ties(d0, rng));
  }
  {
    const Vector d0 = sq_dist(x, x.col(0));
    if (d0.maxCoeff() == 0) throw DegeneracyError("fewer than 2 distinct daily profiles");
  }

  std::vector<int> label(n, -1);
  ClusterResult result;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const Vector d0 = sq_dist(x, c.col(0));
    const Vector d1 = sq_dist(x, c.col(1));
    bool changed = false;
    double inertia = 0;
    for (Index j = 0; j < n; ++j) {
      const int l = d1[j] < d0[j] ? 1 : 0;
      changed |= l != label[j];
      label[j] = l;
      inertia += l ? d1[j] : d0[j];
    }
    result.inertia_history.push_back(inertia);

    Matrix next = Matrix::Zero(x.rows(), 2);
    Index size[2] = {0, 0};
    for (Index j = 0; j < n; ++j) {
      next.col(label[j]) += x.col(j);
      ++size[label[j]];
    }
    for (int k = 0; k < 2; ++k) {
      if (size[k] > 0) {
        next.col(k) /= static_cast<double>(size[k]);
        continue;
      }
      // Empty cluster: reseed at the point farthest from the survivor.
      const int other = 1 - k;
      const Index far = argmax_with_ties(sq_dist(x, next.col(other)), rng);
      next.col(k) = x.col(far);
      label[far] = k;
      changed = true;
    }
    const double shift = (next - c).colwise().norm().maxCoeff();
    c = next;
    if (!changed || shift < opts.tolerance) {
      ++it;
      break;
    }
  }
  result.iterations = it;

  // Hartigan pass: move single points while that strictly lowers the SSE.
  Index size[2] = {0, 0};
  for (Index j = 0; j < n; ++j) ++size[label[j]];
  for (int k = 0; k < 2; ++k) {
    c.col(k).setZero();
    for (Index j = 0; j < n; ++j)
      if (label[j] == k) c.col(k) += x.col(j);
    c.col(k) /= static_cast<double>(size[k]);
  }
  for (bool moved = true; moved;) {
    moved = false;
    for (Index j = 0; j < n; ++j) {
      const int a = label[j], b = 1 - a;
      if (size[a] <= 1) continue;
      const double na = static_cast<double>(size[a]), nb = static_cast<double>(size[b]);
      const double gain = na / (na - 1) * (x.col(j) - c.col(a)).squaredNorm();
      const double cost = nb / (nb + 1) * (x.col(j) - c.col(b)).squaredNorm();
      if (cost < gain * (1 - 1e-12)) {
        c.col(a) = (c.col(a) * na - x.col(j)) / (na - 1);
        c.col(b) = (c.col(b) * nb + x.col(j)) / (nb + 1);
        --size[a];
        ++size[b];
        label[j] = b;
        moved = true;
      }
    }
  }
  // Recompute centroids exactly from the final labels.
  for (int k = 0; k < 2; ++k) {
    c.col(k).setZero();
    for (Index j = 0; j < n; ++j)
      if (label[j] == k) c.col(k) += x.col(j);
    c.col(k) /= static_cast<double>(size[k]);
  }

  const double m0 = c.col(0).mean(), m1 = c.col(1).mean();
  int high;
  if (m0 != m1)
    high = m0 > m1 ? 0 : 1;
  else
    high = lex_less(c.col(0), c.col(1)) ? 1 : 0;

  const Profile& proto = days.front();
  result.high = proto;
  result.high.values = c.col(high);
  result.low = proto;
  result.low.values = c.col(1 - high);
  result.high.start = result.low.start = 0;
  result.assignments.resize(n);
  result.inertia = 0;
  for (Index j = 0; j < n; ++j) {
    result.assignments[j] = label[j] == high ? Level::High : Level::Low;
    result.inertia += (x.col(j) - c.col(label[j])).squaredNorm();
  }
  return result;
}

double partition_inertia(const std::vector<Profile>& days, const std::vector<Level>& labels) {
  double total = 0;
  for (Level l : {Level::High, Level::Low}) {
    Vector sum;
    Index count = 0;
    for (std::size_t j = 0; j < days.size(); ++j) {
      if (labels[j] != l) continue;
      sum = count == 0 ? days[j].values : Vector(sum + days[j].values);
      ++count;
    }
    if (count == 0) continue;
    const Vector mean = sum / static_cast<double>(count);
    for (std::size_t j = 0; j < days.size(); ++j)
      if (labels[j] == l) total += (days[j].values - mean).squaredNorm();
  }
  return total;
}

DemandClusterSet demand_clusters(const std::vector<DatedProfile>& days, const CalendarRule& rule) {
  DayTypeMap<std::vector<const DatedProfile*>> buckets;
  for (const auto& d : days) at(buckets, classify_day(d.first, rule)).push_back(&d);

  DemandClusterSet out;
  for (DayType t : kAllDayTypes) {
    auto& bucket = at(buckets, t);
    if (bucket.empty())
      throw CoverageError("no demand days of type " + std::string(to_string(t)));
    // Fixed summation order makes the mean independent of input order.
    std::sort(bucket.begin(), bucket.end(), [](const DatedProfile* a, const DatedProfile* b) {
      if (a->first != b->first) return a->first < b->first;
      return lex_less(a->second.values, b->second.values);
    });
    const Profile& first = bucket.front()->second;
    Vector sum = Vector::Zero(first.size());
    for (const DatedProfile* d : bucket) {
      if (d->second.size() != first.size() || d->second.step_minutes != first.step_minutes)
        throw AlignmentError("demand days have mismatched lengths or steps");
      sum += d->second.values;
    }
    Profile rep = first;
    rep.start = 0;
    rep.values = sum / static_cast<double>(bucket.size());
    at(out.representative, t) = std::move(rep);
  }
  return out;
}

std::vector<Profile> daily_slices(const Profile& series) {
  std::vector<Profile> out;
  for (Index d = 0; d < series.num_days(); ++d) out.push_back(series.day(d));
  return out;
}

std::vector<DatedProfile> dated_daily_slices(const Profile& series) {
  std::vector<DatedProfile> out;
  for (Index d = 0; d < series.num_days(); ++d)
    out.emplace_back(series.date_of_day(d), series.day(d));
  return out;
}

LevelProbabilities level_probabilities(const ClusterResult& result) {
  const double n = static_cast<double>(result.assignments.size());
  if (n == 0) return {};
  return {static_cast<double>(result.count(Level::High)) / n,
          static_cast<double>(result.count(Level::Low)) / n};
}

}  // namespace bessplan
