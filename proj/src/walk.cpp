#include "idla/walk.hpp"

#include "idla/errors.hpp"
#include "idla/lattice.hpp"

namespace idla {

namespace {

// Sticky strip-visit tracker with O(1) updates: counts hyperplane axes whose
// coordinate lies outside [-bound, bound]; a visit is a moment with none.
struct StripTracker {
    std::int64_t bound = -1;
    int far_axes = 0;
    bool visited = false;

    void init(const Site& z, std::int64_t b) {
        bound = b;
        far_axes = 0;
        visited = false;
        if (b < 0) return;
        for (int i = 1; i < z.dim; ++i)
            if (std::abs(static_cast<std::int64_t>(z[i])) > b) ++far_axes;
        if (far_axes == 0) visited = true;
    }

    inline void on_move(int axis, Coord before, Coord after) {
        if (visited || bound < 0 || axis == 0) return;
        const int was = std::abs(static_cast<std::int64_t>(before)) > bound ? 1 : 0;
        const int now = std::abs(static_cast<std::int64_t>(after)) > bound ? 1 : 0;
        far_axes += now - was;
        if (far_axes == 0) visited = true;
    }
};

// Advances z until it sits outside agg. Generic path for recorded walks,
// plus two lean kernels (dense bitmap with an incremental cell index, and
// hash-backed) for the construction hot loop.
struct WalkState {
    Site z;
    std::uint64_t key = 0;
    std::uint64_t steps = 0;
    StripTracker strip;
};

[[noreturn]] void budget_error(std::uint64_t max_steps) {
    throw StepBudgetExceeded("walk exceeded max_steps=" + std::to_string(max_steps));
}

void advance_hash(const Aggregate& agg, WalkState& st, RngStream& stream,
                  std::uint64_t max_steps) {
    const SitePacker& packer = agg.packer();
    const FlatSet64& set = agg.store().spill();
    const Coord limit = static_cast<Coord>(packer.coord_limit() - 1);
    const std::uint32_t faces = static_cast<std::uint32_t>(2 * agg.dim());
    std::uint64_t deltas[kMaxDim];
    for (int a = 0; a < agg.dim(); ++a) deltas[a] = packer.axis_delta(a);

    while (set.contains(st.key)) {
        if (st.steps >= max_steps) budget_error(max_steps);
        const std::uint32_t r = stream.next_face(faces);
        const int axis = static_cast<int>(r >> 1);
        const Coord before = st.z[axis];
        if (r & 1u) {
            if (before <= -limit) throw CoordinateOverflow("walk left the packable range");
            st.z[axis] = before - 1;
            st.key -= deltas[axis];
        } else {
            if (before >= limit) throw CoordinateOverflow("walk left the packable range");
            st.z[axis] = before + 1;
            st.key += deltas[axis];
        }
        ++st.steps;
        st.strip.on_move(axis, before, st.z[axis]);
    }
}

void advance_dense(const Aggregate& agg, WalkState& st, RngStream& stream,
                   std::uint64_t max_steps) {
    const SitePacker& packer = agg.packer();
    const OccupancyStore& store = agg.store();
    const OccupancyStore::DenseView view = store.dense_view();
    const int d = agg.dim();
    const Coord limit = static_cast<Coord>(packer.coord_limit() - 1);
    const std::uint32_t faces = static_cast<std::uint32_t>(2 * d);

    // per-axis constants; direction handled arithmetically, the random
    // branches would otherwise dominate the loop in mispredictions
    std::int64_t deltas[kMaxDim], strides[kMaxDim];
    Coord blo[kMaxDim], bhi[kMaxDim];
    for (int a = 0; a < d; ++a) {
        deltas[a] = static_cast<std::int64_t>(packer.axis_delta(a));
        strides[a] = view.stride[a];
        blo[a] = static_cast<Coord>(view.lo[a]);
        bhi[a] = static_cast<Coord>(view.lo[a] + view.ext[a] - 1);
    }

    // idx is the affine extension of the cell index; it is exact for every
    // position and only dereferenced when all axes are inside the box
    int axes_out = 0;
    std::int64_t idx = 0;
    for (int a = 0; a < d; ++a) {
        if (st.z[a] < blo[a] || st.z[a] > bhi[a]) ++axes_out;
        idx += (static_cast<std::int64_t>(st.z[a]) - view.lo[a]) * strides[a];
    }

    const std::int64_t sbound = st.strip.bound;
    int far_axes = st.strip.far_axes;
    int visited = st.strip.visited ? 1 : 0;

    while (true) {
        const bool occupied =
            axes_out == 0
                ? ((view.bits[static_cast<std::uint64_t>(idx) >> 6] >> (idx & 63)) & 1u) != 0
                : store.spill().contains(st.key);
        if (!occupied) break;
        if (st.steps >= max_steps) budget_error(max_steps);

        const std::uint32_t r = stream.next_face(faces);
        const int axis = static_cast<int>(r >> 1);
        const int dir = 1 - 2 * static_cast<int>(r & 1u);
        const Coord before = st.z[axis];
        const Coord after = static_cast<Coord>(before + dir);
        if (after > limit || after < -limit)
            throw CoordinateOverflow("walk left the packable range");
        st.z[axis] = after;
        st.key += static_cast<std::uint64_t>(deltas[axis] * dir);
        idx += strides[axis] * dir;
        ++st.steps;

        const int was_in = (before >= blo[axis]) & (before <= bhi[axis]);
        const int now_in = (after >= blo[axis]) & (after <= bhi[axis]);
        axes_out += was_in - now_in;

        const int hyper = axis != 0;
        const int was_far = (before > sbound) | (before < -sbound);
        const int now_far = (after > sbound) | (after < -sbound);
        far_axes += hyper * (now_far - was_far);
        visited |= (far_axes == 0);
    }

    st.strip.far_axes = far_axes;
    if (st.strip.bound >= 0 && visited) st.strip.visited = true;
}

void advance_recorded(const Aggregate& agg, WalkState& st, RngStream& stream,
                      const WalkOpts& opts, std::vector<Site>& path) {
    const SitePacker& packer = agg.packer();
    const Coord limit = static_cast<Coord>(packer.coord_limit() - 1);
    const std::uint32_t faces = static_cast<std::uint32_t>(2 * agg.dim());
    while (agg.contains(st.z, st.key)) {
        if (st.steps >= opts.max_steps) budget_error(opts.max_steps);
        const std::uint32_t r = stream.next_face(faces);
        const int axis = static_cast<int>(r >> 1);
        const Coord before = st.z[axis];
        if (r & 1u) {
            if (before <= -limit) throw CoordinateOverflow("walk left the packable range");
            st.z[axis] = before - 1;
            st.key -= packer.axis_delta(axis);
        } else {
            if (before >= limit) throw CoordinateOverflow("walk left the packable range");
            st.z[axis] = before + 1;
            st.key += packer.axis_delta(axis);
        }
        ++st.steps;
        st.strip.on_move(axis, before, st.z[axis]);
        path.push_back(st.z);
    }
}

} // namespace

namespace detail {

void advance_until_exit(const Aggregate& agg, Site& z, std::uint64_t& key, RngStream& stream,
                        std::int64_t strip_bound, bool& visited_strip, std::uint64_t max_steps,
                        std::uint64_t& steps) {
    WalkState st;
    st.z = z;
    st.key = key;
    st.steps = steps;
    st.strip.init(z, strip_bound);
    if (visited_strip) st.strip.visited = true;
    if (agg.store().is_dense())
        advance_dense(agg, st, stream, max_steps);
    else
        advance_hash(agg, st, stream, max_steps);
    z = st.z;
    key = st.key;
    steps = st.steps;
    visited_strip = visited_strip || st.strip.visited;
}

} // namespace detail

ParticleTrace run_until_exit(const Aggregate& agg, const Site& start, RngStream stream,
                             const WalkOpts& opts) {
    if (start.dim != agg.dim()) throw DimensionMismatch("walk start dimension mismatch");

    ParticleTrace tr;
    tr.start = start;
    tr.strip_tracked = opts.strip_bound >= 0;

    WalkState st;
    st.z = start;
    st.key = agg.packer().pack(start);
    st.strip.init(start, opts.strip_bound);

    if (opts.record_path) {
        tr.path.push_back(start);
        advance_recorded(agg, st, stream, opts, tr.path);
    } else if (agg.store().is_dense()) {
        advance_dense(agg, st, stream, opts.max_steps);
    } else {
        advance_hash(agg, st, stream, opts.max_steps);
    }

    tr.exit_site = st.z;
    tr.steps = st.steps;
    tr.visited_strip = st.strip.visited && tr.strip_tracked;
    tr.settle_index = opts.record_path ? static_cast<std::int64_t>(tr.path.size()) - 1
                                       : static_cast<std::int64_t>(tr.steps);

    if (opts.continue_slab >= 0) {
        const std::uint32_t faces = static_cast<std::uint32_t>(2 * agg.dim());
        const Coord limit = static_cast<Coord>(agg.packer().coord_limit() - 1);
        Site z = st.z;
        while (std::abs(static_cast<std::int64_t>(z[0])) < opts.continue_slab) {
            if (tr.steps >= opts.max_steps) budget_error(opts.max_steps);
            const std::uint32_t r = stream.next_face(faces);
            const int axis = static_cast<int>(r >> 1);
            z[axis] += (r & 1u) ? -1 : 1;
            if (std::abs(static_cast<std::int64_t>(z[axis])) > limit)
                throw CoordinateOverflow("walk continuation left the packable range");
            ++tr.steps;
            if (opts.record_path) tr.path.push_back(z);
        }
        tr.exit_site = st.z; // settlement site, not the continuation's end
    }

    return tr;
}

} // namespace idla
