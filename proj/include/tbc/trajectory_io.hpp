#ifndef TBC_TRAJECTORY_IO_HPP
#define TBC_TRAJECTORY_IO_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "tbc/cn_solver.hpp"

namespace tbc {

/// Columnar binary snapshot stream: fixed header (J, dx, x0, stride, N),
/// then one record per emitted snapshot: time as f64 followed by (re, im)
/// f64 pairs for nodes 0..J.
class SnapshotWriter {
public:
    SnapshotWriter(const std::string& path, const SpatialGrid& g, int stride, int N);
    void write(double t, const std::vector<cdouble>& u);
    int records() const { return records_; }

private:
    std::ofstream out_;
    int J_, records_ = 0;
};

struct SnapshotStream {
    int J = 0, stride = 0, N = 0;
    double dx = 0.0, x0 = 0.0;
    std::vector<double> times;
    std::vector<std::vector<cdouble>> frames;
};

SnapshotStream read_snapshots(const std::string& path);

/// CSV export of a snapshot stream: header `t,x,re,im`, one row per node per frame.
void export_snapshots_csv(const SnapshotStream& s, const std::string& path);

/// Boundary trace CSV: header `m,t,side,u_re,u_im,v_re,v_im`, sides "L"/"R".
void write_traces_csv(const std::string& path, const BoundaryTraces& tr, double dt);
BoundaryTraces read_traces_csv(const std::string& path, double* dt_out = nullptr);

}  // namespace tbc

#endif
