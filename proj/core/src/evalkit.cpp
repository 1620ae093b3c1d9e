#include "flowcomp/evalkit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "flowcomp/errors.hpp"
#include "flowcomp/rng.hpp"

namespace flowcomp {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string normalize_class_key(const std::string& name) {
  std::string key;
  for (char c : name)
    if (c != '-' && c != '_' && c != ' ')
      key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return key;
}

bool share_any(const std::vector<std::string>& a,
               const std::vector<std::string>& b) {
  for (const std::string& x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  return false;
}

std::map<std::string, size_t> index_by_id(const LabeledEmbeddingSet& data) {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < data.entries.size(); ++i)
    index.emplace(data.entries[i].id, i);
  return index;
}

size_t lookup(const std::map<std::string, size_t>& index, const std::string& id) {
  const auto it = index.find(id);
  if (it == index.end())
    throw InvalidArgumentError("unknown id in triplet: " + id);
  return it->second;
}

// Clusters keyed by the first composition label, in first-seen order of
// the sorted entries.
std::vector<std::vector<size_t>> primary_clusters(const LabeledEmbeddingSet& data) {
  std::map<std::string, size_t> key_to_cluster;
  std::vector<std::vector<size_t>> clusters;
  for (size_t i = 0; i < data.entries.size(); ++i) {
    const LabeledEntry& e = data.entries[i];
    if (e.comp_labels.empty())
      throw InvalidArgumentError("entry without composition labels: " + e.id);
    const std::string& key = e.comp_labels.front();
    auto [it, inserted] = key_to_cluster.emplace(key, clusters.size());
    if (inserted) clusters.emplace_back();
    clusters[it->second].push_back(i);
  }
  return clusters;
}

std::vector<double> centroid(const LabeledEmbeddingSet& data,
                             const std::vector<size_t>& members) {
  std::vector<double> c(data.dim, 0.0);
  for (size_t i : members)
    for (size_t d = 0; d < data.dim; ++d) c[d] += data.entries[i].embedding[d];
  for (double& v : c) v /= static_cast<double>(members.size());
  return c;
}

}  // namespace

CdaMode cda_mode_from_string(const std::string& name) {
  if (name == "cda1") return CdaMode::Cda1;
  if (name == "cda2") return CdaMode::Cda2;
  throw InvalidArgumentError("unknown CDA mode: " + name);
}

std::string to_string(CdaMode mode) {
  return mode == CdaMode::Cda1 ? "cda1" : "cda2";
}

const std::vector<std::string>& kupcp_classes() {
  static const std::vector<std::string> classes = {
      "RuleOfThirds", "Center",   "Horizontal", "Symmetric", "Diagonal",
      "Curved",       "Vertical", "Triangle",   "Pattern"};
  return classes;
}

std::map<std::string, std::vector<double>> load_embeddings(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path);
  std::map<std::string, std::vector<double>> out;
  size_t dim = 0;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() < 2)
      throw ParseError("embedding row needs an id and at least one value", line_no);
    const std::string& id = cells.front();
    if (id.empty()) throw ParseError("empty id", line_no);
    std::vector<double> vec;
    vec.reserve(cells.size() - 1);
    for (size_t i = 1; i < cells.size(); ++i) {
      double v = 0;
      const char* first = cells[i].data();
      const char* last = first + cells[i].size();
      const auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
        throw ParseError("non-numeric value '" + cells[i] + "'", line_no);
      vec.push_back(v);
    }
    if (dim == 0)
      dim = vec.size();
    else if (vec.size() != dim)
      throw ParseError("ragged row: expected " + std::to_string(dim) +
                           " values, got " + std::to_string(vec.size()),
                       line_no);
    if (!out.emplace(id, std::move(vec)).second)
      throw ParseError("duplicate id '" + id + "'", line_no);
  }
  return out;
}

std::map<std::string, LabelPair> load_labels(const std::string& path,
                                             bool strict) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path);

  std::map<std::string, std::string> canonical;
  for (const std::string& name : kupcp_classes())
    canonical[normalize_class_key(name)] = name;

  std::map<std::string, LabelPair> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> cols = split(line, '\t');
    if (cols.size() < 2)
      throw ParseError("label row needs id<TAB>composition[<TAB>semantic]", line_no);
    const std::string& id = cols[0];
    if (id.empty()) throw ParseError("empty id", line_no);

    LabelPair labels;
    for (const std::string& raw : split(cols[1], ';')) {
      if (raw.empty()) continue;
      if (strict) {
        const auto it = canonical.find(normalize_class_key(raw));
        if (it == canonical.end())
          throw ParseError("unknown composition class '" + raw + "'", line_no);
        if (std::find(labels.comp.begin(), labels.comp.end(), it->second) ==
            labels.comp.end())
          labels.comp.push_back(it->second);
      } else if (std::find(labels.comp.begin(), labels.comp.end(), raw) ==
                 labels.comp.end()) {
        labels.comp.push_back(raw);
      }
    }
    if (labels.comp.empty())
      throw ParseError("empty composition set for id '" + id + "'", line_no);
    if (cols.size() >= 3)
      for (const std::string& raw : split(cols[2], ';'))
        if (!raw.empty() && std::find(labels.sem.begin(), labels.sem.end(),
                                      raw) == labels.sem.end())
          labels.sem.push_back(raw);
    if (!out.emplace(id, std::move(labels)).second)
      throw ParseError("duplicate id '" + id + "'", line_no);
  }
  return out;
}

LabeledEmbeddingSet make_labeled_set(
    const std::map<std::string, std::vector<double>>& embeddings,
    const std::map<std::string, LabelPair>& labels) {
  LabeledEmbeddingSet set;
  for (const auto& [id, vec] : embeddings) {
    const auto it = labels.find(id);
    if (it == labels.end()) continue;
    set.entries.push_back({id, vec, it->second.comp, it->second.sem});
    if (set.dim == 0) set.dim = vec.size();
  }
  // std::map iteration is already id-sorted.
  return set;
}

double l2_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw InvalidArgumentError("l2_distance: dimension mismatch " +
                               std::to_string(a.size()) + " vs " +
                               std::to_string(b.size()));
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::vector<Triplet> sample_triplets(const LabeledEmbeddingSet& data,
                                     CdaMode mode, uint64_t seed,
                                     int per_anchor) {
  if (data.entries.empty())
    throw InvalidArgumentError("sample_triplets: empty embedding set");
  if (per_anchor < 1)
    throw InvalidArgumentError("sample_triplets: per_anchor must be >= 1");

  // Visit entries by ascending id regardless of their order in the set, so
  // the output is a pure function of (ids, labels, mode, seed, per_anchor).
  std::vector<const LabeledEntry*> sorted;
  sorted.reserve(data.entries.size());
  for (const LabeledEntry& e : data.entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const LabeledEntry* a, const LabeledEntry* b) {
              return a->id < b->id;
            });

  SplitMix64 rng(seed);
  std::vector<Triplet> out;
  for (const LabeledEntry* anchor : sorted) {
    if (anchor->comp_labels.empty()) continue;
    std::vector<const LabeledEntry*> positives, negatives;
    for (const LabeledEntry* other : sorted) {
      if (other == anchor) continue;
      if (share_any(anchor->comp_labels, other->comp_labels)) {
        positives.push_back(other);
      } else {
        if (mode == CdaMode::Cda2 &&
            !share_any(anchor->sem_labels, other->sem_labels))
          continue;
        negatives.push_back(other);
      }
    }
    if (positives.empty() || negatives.empty()) continue;
    for (int t = 0; t < per_anchor; ++t) {
      const LabeledEntry* p = positives[rng.next_below(positives.size())];
      const LabeledEntry* n = negatives[rng.next_below(negatives.size())];
      out.push_back({anchor->id, p->id, n->id});
    }
  }
  if (out.empty())
    throw InvalidArgumentError("sample_triplets: no valid triplets under mode " +
                               to_string(mode));
  return out;
}

double cda(const LabeledEmbeddingSet& data, const std::vector<Triplet>& triplets) {
  if (triplets.empty())
    throw InvalidArgumentError("cda: empty triplet list");
  const std::map<std::string, size_t> index = index_by_id(data);
  size_t correct = 0;
  for (const Triplet& t : triplets) {
    const LabeledEntry& a = data.entries[lookup(index, t.anchor)];
    const LabeledEntry& p = data.entries[lookup(index, t.positive)];
    const LabeledEntry& n = data.entries[lookup(index, t.negative)];
    if (l2_distance(a.embedding, p.embedding) <
        l2_distance(a.embedding, n.embedding))
      ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(triplets.size());
}

CdaReport cda_multiseed(const LabeledEmbeddingSet& data, CdaMode mode,
                        const std::vector<uint64_t>& seeds, int per_anchor) {
  if (seeds.empty())
    throw InvalidArgumentError("cda_multiseed: no seeds given");
  CdaReport report;
  report.mode = mode;
  for (uint64_t seed : seeds) {
    const std::vector<Triplet> triplets =
        sample_triplets(data, mode, seed, per_anchor);
    report.per_seed.push_back({seed, cda(data, triplets), triplets.size()});
  }
  double sum = 0.0;
  for (const SeedResult& r : report.per_seed) sum += r.accuracy;
  report.mean = sum / static_cast<double>(report.per_seed.size());
  double sq = 0.0;
  for (const SeedResult& r : report.per_seed) {
    const double d = r.accuracy - report.mean;
    sq += d * d;
  }
  report.stddev = std::sqrt(sq / static_cast<double>(report.per_seed.size()));
  report.cv = report.mean > 0.0 ? report.stddev / report.mean : 0.0;
  return report;
}

double davies_bouldin(const LabeledEmbeddingSet& data) {
  const std::vector<std::vector<size_t>> clusters = primary_clusters(data);
  if (clusters.size() < 2)
    throw InvalidArgumentError("davies_bouldin: need at least 2 clusters");

  std::vector<std::vector<double>> centroids;
  std::vector<double> dispersion;
  for (const std::vector<size_t>& members : clusters) {
    centroids.push_back(centroid(data, members));
    double s = 0.0;
    for (size_t i : members)
      s += l2_distance(data.entries[i].embedding, centroids.back());
    dispersion.push_back(s / static_cast<double>(members.size()));
  }

  double total = 0.0;
  for (size_t i = 0; i < clusters.size(); ++i) {
    double worst = 0.0;
    for (size_t j = 0; j < clusters.size(); ++j) {
      if (i == j) continue;
      const double m = l2_distance(centroids[i], centroids[j]);
      const double r = m > 0.0 ? (dispersion[i] + dispersion[j]) / m
                               : std::numeric_limits<double>::infinity();
      worst = std::max(worst, r);
    }
    total += worst;
  }
  return total / static_cast<double>(clusters.size());
}

double silhouette(const LabeledEmbeddingSet& data) {
  const std::vector<std::vector<size_t>> clusters = primary_clusters(data);
  if (clusters.size() < 2)
    throw InvalidArgumentError("silhouette: need at least 2 clusters");

  std::vector<size_t> cluster_of(data.entries.size());
  for (size_t c = 0; c < clusters.size(); ++c)
    for (size_t i : clusters[c]) cluster_of[i] = c;

  double total = 0.0;
  for (size_t i = 0; i < data.entries.size(); ++i) {
    const size_t own = cluster_of[i];
    if (clusters[own].size() < 2) continue;  // singleton scores 0

    double intra = 0.0;
    for (size_t j : clusters[own])
      if (j != i)
        intra += l2_distance(data.entries[i].embedding, data.entries[j].embedding);
    const double a = intra / static_cast<double>(clusters[own].size() - 1);

    double b = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < clusters.size(); ++c) {
      if (c == own) continue;
      double inter = 0.0;
      for (size_t j : clusters[c])
        inter += l2_distance(data.entries[i].embedding, data.entries[j].embedding);
      b = std::min(b, inter / static_cast<double>(clusters[c].size()));
    }

    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(data.entries.size());
}

}  // namespace flowcomp
