// In-process partitioned dataflow. A Dataset is an ordered list of record
// blocks; the Executor runs one stage at a time across all partitions on a
// fixed worker pool and merges by concatenating partition outputs in
// partition order, so results never depend on the worker count.
#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <iterator>
#include <mutex>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mirflow/errors.hpp"
#include "mirflow/metrics.hpp"
#include "mirflow/thread_pool.hpp"

namespace mirflow {

template <typename T>
struct Dataset {
  std::vector<std::vector<T>> partitions;

  std::size_t partition_count() const { return partitions.size(); }

  std::size_t total_count() const {
    std::size_t n = 0;
    for (const auto& p : partitions) n += p.size();
    return n;
  }

  // The logical record sequence: partitions concatenated in order.
  std::vector<T> collect() const {
    std::vector<T> out;
    out.reserve(total_count());
    for (const auto& p : partitions) out.insert(out.end(), p.begin(), p.end());
    return out;
  }
};

// Splits into n contiguous blocks whose sizes differ by at most one; the
// first (count mod n) blocks carry the extra record.
template <typename T>
Dataset<T> partition(std::vector<T> records, std::size_t n) {
  if (n < 1) n = 1;
  Dataset<T> ds;
  ds.partitions.resize(n);
  std::size_t count = records.size();
  std::size_t base = count / n;
  std::size_t rem = count % n;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t len = base + (i < rem ? 1 : 0);
    auto first = std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>(pos));
    ds.partitions[i].assign(first, first + static_cast<std::ptrdiff_t>(len));
    pos += len;
  }
  return ds;
}

template <typename T>
Dataset<T> repartition(Dataset<T> ds, std::size_t n) {
  return partition(ds.collect(), n);
}

class Executor {
 public:
  explicit Executor(std::size_t workers) : pool_(workers) {}

  std::size_t workers() const { return pool_.worker_count(); }

  const std::vector<StageMetrics>& metrics() const { return metrics_; }
  void reset_metrics() { metrics_.clear(); }

  // map: one output record per input record.
  template <typename T, typename F>
  auto map(const Dataset<T>& in, const std::string& name, F&& fn)
      -> Dataset<std::decay_t<decltype(fn(std::declval<const T&>()))>> {
    using U = std::decay_t<decltype(fn(std::declval<const T&>()))>;
    return run_stage<U>(in, name, [&fn](const T& rec, std::vector<U>& out) {
      out.push_back(fn(rec));
    });
  }

  // filter: keeps records whose predicate holds, unmodified.
  template <typename T, typename P>
  Dataset<T> filter(const Dataset<T>& in, const std::string& name, P&& pred) {
    return run_stage<T>(in, name, [&pred](const T& rec, std::vector<T>& out) {
      if (pred(rec)) out.push_back(rec);
    });
  }

  // flat_map: zero or more output records per input record.
  template <typename T, typename F>
  auto flat_map(const Dataset<T>& in, const std::string& name, F&& fn)
      -> Dataset<typename std::decay_t<decltype(fn(std::declval<const T&>()))>::value_type> {
    using U = typename std::decay_t<decltype(fn(std::declval<const T&>()))>::value_type;
    return run_stage<U>(in, name, [&fn](const T& rec, std::vector<U>& out) {
      auto produced = fn(rec);
      for (auto& u : produced) out.push_back(std::move(u));
    });
  }

  // join_reference: a map that may consult a shared read-only broadcast
  // value (e.g. the aligned-record snapshot or the genome index).
  template <typename T, typename B, typename F>
  auto join_reference(const Dataset<T>& in, const std::string& name, const B& broadcast, F&& fn)
      -> Dataset<std::decay_t<decltype(fn(std::declval<const T&>(), std::declval<const B&>()))>> {
    using U = std::decay_t<decltype(fn(std::declval<const T&>(), std::declval<const B&>()))>;
    return run_stage<U>(in, name, [&fn, &broadcast](const T& rec, std::vector<U>& out) {
      out.push_back(fn(rec, broadcast));
    });
  }

 private:
  struct Failure {
    std::size_t index;
    std::string cause;
  };

  // Runs emit(record, partition_output) for every record, partitions in
  // parallel. A throwing record aborts its partition; afterwards the
  // failure with the smallest global record index wins, so the reported
  // StageFailure is identical no matter how many workers ran.
  template <typename U, typename T, typename Emit>
  Dataset<U> run_stage(const Dataset<T>& in, const std::string& name, const Emit& emit) {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t nparts = in.partitions.size();
    std::vector<std::size_t> offsets(nparts, 0);
    for (std::size_t i = 1; i < nparts; ++i)
      offsets[i] = offsets[i - 1] + in.partitions[i - 1].size();

    Dataset<U> out;
    out.partitions.resize(nparts);

    std::mutex fail_mu;
    std::vector<Failure> failures;

    pool_.run_indexed(nparts, [&](std::size_t p) {
      const auto& src = in.partitions[p];
      auto& dst = out.partitions[p];
      dst.reserve(src.size());
      for (std::size_t i = 0; i < src.size(); ++i) {
        try {
          emit(src[i], dst);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lk(fail_mu);
          failures.push_back({offsets[p] + i, e.what()});
          return;
        } catch (...) {
          std::lock_guard<std::mutex> lk(fail_mu);
          failures.push_back({offsets[p] + i, "unknown error"});
          return;
        }
      }
    });

    if (!failures.empty()) {
      auto it = std::min_element(
          failures.begin(), failures.end(),
          [](const Failure& a, const Failure& b) { return a.index < b.index; });
      throw StageFailure(name, it->index, it->cause);
    }

    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    record_metrics(name, in.total_count(), out.total_count(), seconds);
    return out;
  }

  void record_metrics(const std::string& name, std::size_t in_count, std::size_t out_count,
                      double seconds);

  ThreadPool pool_;
  std::vector<StageMetrics> metrics_;
};

// Homogeneous stage description for plans where every stage maps T to T.
// The heterogeneous pipeline composes Executor calls directly instead.
template <typename T>
struct Stage {
  enum class Kind { Map, Filter, FlatMap, JoinReference };

  Kind kind;
  std::string name;
  std::function<T(const T&)> map_fn;
  std::function<bool(const T&)> filter_fn;
  std::function<std::vector<T>(const T&)> flat_map_fn;

  static Stage map(std::string name, std::function<T(const T&)> fn) {
    Stage s;
    s.kind = Kind::Map;
    s.name = std::move(name);
    s.map_fn = std::move(fn);
    return s;
  }
  static Stage filter(std::string name, std::function<bool(const T&)> fn) {
    Stage s;
    s.kind = Kind::Filter;
    s.name = std::move(name);
    s.filter_fn = std::move(fn);
    return s;
  }
  static Stage flat_map(std::string name, std::function<std::vector<T>(const T&)> fn) {
    Stage s;
    s.kind = Kind::FlatMap;
    s.name = std::move(name);
    s.flat_map_fn = std::move(fn);
    return s;
  }
  // The broadcast value is captured inside fn; the tag only marks intent.
  static Stage join_reference(std::string name, std::function<T(const T&)> fn) {
    Stage s;
    s.kind = Kind::JoinReference;
    s.name = std::move(name);
    s.map_fn = std::move(fn);
    return s;
  }
};

template <typename T>
Dataset<T> run_pipeline(Executor& ex, const std::vector<Stage<T>>& plan, Dataset<T> input) {
  Dataset<T> cur = std::move(input);
  for (const auto& s : plan) {
    switch (s.kind) {
      case Stage<T>::Kind::Map:
      case Stage<T>::Kind::JoinReference:
        cur = ex.map(cur, s.name, s.map_fn);
        break;
      case Stage<T>::Kind::Filter:
        cur = ex.filter(cur, s.name, s.filter_fn);
        break;
      case Stage<T>::Kind::FlatMap:
        cur = ex.flat_map(cur, s.name, s.flat_map_fn);
        break;
    }
  }
  return cur;
}

}  // namespace mirflow
