#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace flowcomp {

/// One evaluated image: embedding plus composition and semantic label
/// lists. Label order is preserved from the input file; the first
/// composition label is the primary cluster label.
struct LabeledEntry {
  std::string id;
  std::vector<double> embedding;
  std::vector<std::string> comp_labels;
  std::vector<std::string> sem_labels;
};

/// Entries sorted by id, all embeddings sharing one dimensionality.
struct LabeledEmbeddingSet {
  std::vector<LabeledEntry> entries;
  size_t dim = 0;
};

struct Triplet {
  std::string anchor;
  std::string positive;
  std::string negative;
};

enum class CdaMode { Cda1, Cda2 };

CdaMode cda_mode_from_string(const std::string& name);
std::string to_string(CdaMode mode);

struct SeedResult {
  uint64_t seed = 0;
  double accuracy = 0.0;
  size_t n_triplets = 0;
};

struct CdaReport {
  CdaMode mode = CdaMode::Cda1;
  std::vector<SeedResult> per_seed;
  double mean = 0.0;
  double stddev = 0.0;  // population std over seeds
  double cv = 0.0;      // stddev / mean when mean > 0, else 0
};

inline const std::vector<uint64_t> kDefaultSeeds = {42, 43, 44, 45, 46};
inline constexpr int kDefaultPerAnchor = 12;

/// The KUPCP composition classes accepted in strict label mode.
const std::vector<std::string>& kupcp_classes();

/// Parses "id,v1,...,vD" rows. Throws ParseError on ragged rows,
/// non-numeric values or duplicate ids (with line numbers).
std::map<std::string, std::vector<double>> load_embeddings(
    const std::string& path);

struct LabelPair {
  std::vector<std::string> comp;
  std::vector<std::string> sem;
};

/// Parses "id<TAB>comp1;comp2<TAB>sem1;sem2" rows; the semantic column may
/// be empty. In strict mode composition names must match the nine KUPCP
/// classes (case- and punctuation-insensitively) and are stored in
/// canonical spelling.
std::map<std::string, LabelPair> load_labels(const std::string& path,
                                             bool strict = true);

/// Joins embeddings with labels on id; ids present in only one input are
/// dropped. Result entries are id-sorted.
LabeledEmbeddingSet make_labeled_set(
    const std::map<std::string, std::vector<double>>& embeddings,
    const std::map<std::string, LabelPair>& labels);

double l2_distance(const std::vector<double>& a, const std::vector<double>& b);

/// Seeded triplet sampling. Deterministic contract: entries are visited in
/// ascending id order; one SplitMix64 stream seeded with `seed` drives all
/// draws; each anchor with at least one valid positive and one valid
/// negative contributes exactly per_anchor triplets, drawn as positive
/// index then negative index from the id-sorted candidate lists via
/// next() % count. Validity: a positive shares >= 1 composition label with
/// the anchor; a negative shares none; in Cda2 mode the negative must also
/// share >= 1 semantic label with the anchor. Throws InvalidArgumentError
/// when no triplets can be formed at all.
std::vector<Triplet> sample_triplets(const LabeledEmbeddingSet& data,
                                     CdaMode mode, uint64_t seed,
                                     int per_anchor = kDefaultPerAnchor);

/// Fraction of triplets with d(anchor, positive) strictly less than
/// d(anchor, negative); ties count as incorrect.
double cda(const LabeledEmbeddingSet& data, const std::vector<Triplet>& triplets);

CdaReport cda_multiseed(const LabeledEmbeddingSet& data, CdaMode mode,
                        const std::vector<uint64_t>& seeds = kDefaultSeeds,
                        int per_anchor = kDefaultPerAnchor);

/// Davies-Bouldin index over clusters keyed by each entry's first
/// composition label: mean over clusters of the worst (Si+Sj)/Mij ratio.
double davies_bouldin(const LabeledEmbeddingSet& data);

/// Mean silhouette over entries, clusters keyed by the first composition
/// label. Entries whose cluster is a singleton score 0, as does the
/// degenerate 0/0 case.
double silhouette(const LabeledEmbeddingSet& data);

}  // namespace flowcomp
