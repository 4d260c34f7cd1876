#include "burst/burst_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>

namespace burst {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

class KeyValueFile {
  public:
    explicit KeyValueFile(const std::filesystem::path& path) : path_(path.string()) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open manifest '" + path_ + "'");
        std::string line;
        while (std::getline(in, line)) {
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            const std::size_t eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("manifest '" + path_ + "': malformed line '" + t + "'");
            values_[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
        }
    }

    const std::string& get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError("manifest '" + path_ + "': missing key '" + key + "'");
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    int get_int(const std::string& key) const {
        try {
            return std::stoi(get(key));
        } catch (const std::logic_error&) {
            throw ConfigError("manifest '" + path_ + "': key '" + key + "' is not an integer");
        }
    }

    double get_double(const std::string& key) const {
        try {
            return std::stod(get(key));
        } catch (const std::logic_error&) {
            throw ConfigError("manifest '" + path_ + "': key '" + key + "' is not a number");
        }
    }

  private:
    std::string path_;
    std::map<std::string, std::string> values_;
};

}  // namespace

void validate(const CaptureSchedule& s) {
    if (s.n_frames < 1) throw ConfigError("capture schedule: n_frames must be >= 1");
    if (s.frame_time_ms <= 0 || s.burst_duration_ms <= 0 || s.inter_burst_gap_ms <= 0 ||
        s.exposure_ms <= 0)
        throw ConfigError("capture schedule: all times must be positive");
    if (s.gain_db < 0) throw ConfigError("capture schedule: gain_db must be >= 0");
    if (s.burst_duration_ms < s.n_frames * s.frame_time_ms)
        throw ConfigError("capture schedule: burst_duration_ms " +
                          std::to_string(s.burst_duration_ms) + " is shorter than n_frames * " +
                          "frame_time_ms");
}

BurstManifest read_manifest(const std::filesystem::path& path) {
    const KeyValueFile kv(path);
    BurstManifest m;
    m.meta.width = kv.get_int("width");
    m.meta.height = kv.get_int("height");
    m.meta.bit_depth = kv.get_int("bit_depth");
    m.meta.pattern = bayer_pattern_from_string(kv.get("bayer_pattern"));
    m.meta.black_level = kv.get_int("black_level");
    m.schedule.n_frames = kv.get_int("n_frames");
    m.schedule.frame_time_ms = kv.get_double("frame_time_ms");
    m.schedule.burst_duration_ms = kv.get_double("burst_duration_ms");
    m.schedule.inter_burst_gap_ms = kv.get_double("inter_burst_gap_ms");
    m.schedule.exposure_ms = kv.get_double("exposure_ms");
    m.schedule.gain_db = kv.get_double("gain_db");
    m.reference_policy = kv.get_or("reference_policy", "center");
    validate(m.schedule);
    return m;
}

void write_manifest(const BurstManifest& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest '" + path.string() + "'");
    out << "width=" << m.meta.width << "\n";
    out << "height=" << m.meta.height << "\n";
    out << "bit_depth=" << m.meta.bit_depth << "\n";
    out << "bayer_pattern=" << to_string(m.meta.pattern) << "\n";
    out << "black_level=" << m.meta.black_level << "\n";
    out << "n_frames=" << m.schedule.n_frames << "\n";
    out << "frame_time_ms=" << m.schedule.frame_time_ms << "\n";
    out << "burst_duration_ms=" << m.schedule.burst_duration_ms << "\n";
    out << "inter_burst_gap_ms=" << m.schedule.inter_burst_gap_ms << "\n";
    out << "exposure_ms=" << m.schedule.exposure_ms << "\n";
    out << "gain_db=" << m.schedule.gain_db << "\n";
    out << "reference_policy=" << m.reference_policy << "\n";
    if (!out) throw IoError("write failed for manifest '" + path.string() + "'");
}

std::size_t resolve_reference_index(const std::string& policy, std::size_t n_frames) {
    if (n_frames == 0) throw ConfigError("burst has no frames");
    if (policy == "center") return n_frames / 2;
    if (policy == "first") return 0;
    if (policy == "last") return n_frames - 1;
    bool numeric = !policy.empty();
    for (char c : policy)
        if (!std::isdigit(static_cast<unsigned char>(c))) numeric = false;
    if (numeric) {
        const std::size_t idx = std::stoul(policy);
        if (idx >= n_frames)
            throw ConfigError("reference_policy index " + policy + " out of range for " +
                              std::to_string(n_frames) + " frames");
        return idx;
    }
    throw ConfigError("unknown reference_policy '" + policy + "'");
}

std::string frame_file_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%03zu.raw", index);
    return buf;
}

RawBurst load_burst(const std::filesystem::path& dir) {
    const BurstManifest m = read_manifest(dir / "manifest.txt");
    RawBurst burst;
    burst.schedule = m.schedule;
    burst.frames.reserve(static_cast<std::size_t>(m.schedule.n_frames));
    for (int i = 0; i < m.schedule.n_frames; ++i) {
        const std::filesystem::path p = dir / frame_file_name(static_cast<std::size_t>(i));
        if (!std::filesystem::exists(p))
            throw IoError("load_burst: manifest lists " + std::to_string(m.schedule.n_frames) +
                          " frames but '" + p.string() + "' is missing");
        burst.frames.push_back(load_raw(p, m.meta));
    }
    burst.reference_index = resolve_reference_index(m.reference_policy, burst.frames.size());
    return burst;
}

void save_burst(const RawBurst& burst, const std::filesystem::path& dir,
                const std::string& reference_policy) {
    if (burst.frames.empty()) throw ConfigError("save_burst: burst has no frames");
    std::filesystem::create_directories(dir);
    BurstManifest m;
    const RawFrame& first = burst.frames.front();
    m.meta.width = first.width;
    m.meta.height = first.height;
    m.meta.bit_depth = first.bit_depth;
    m.meta.pattern = first.pattern;
    m.meta.black_level = first.black_level;
    m.schedule = burst.schedule;
    m.schedule.n_frames = static_cast<int>(burst.frames.size());
    m.reference_policy = reference_policy;
    write_manifest(m, dir / "manifest.txt");
    for (std::size_t i = 0; i < burst.frames.size(); ++i)
        save_raw(burst.frames[i], dir / frame_file_name(i));
}

Burst to_gray_burst(const RawBurst& raw) {
    if (raw.frames.empty()) throw ConfigError("to_gray_burst: burst has no frames");
    Burst out;
    out.reference_index = raw.reference_index;
    out.schedule = raw.schedule;
    out.frames.reserve(raw.frames.size());
    for (const RawFrame& f : raw.frames)
        out.frames.push_back(f.pattern == BayerPattern::None ? raw_to_gray_full(f)
                                                             : bayer_to_gray(f));
    for (const GrayImage& g : out.frames)
        if (!g.same_shape(out.frames.front()))
            throw GeometryError("to_gray_burst: inconsistent frame dimensions");
    return out;
}

}  // namespace burst
