#include "banditnav/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <set>
#include <sstream>

namespace banditnav {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& what)
    : Error("config field '" + field + "': " + what), field_(std::move(field)) {}

namespace {

/// Reads members of one JSON table, remembering which keys were consumed.
class Table {
public:
    Table(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected a table");
    }

    std::string field(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    const json* find(std::string_view key) {
        seen_.emplace(key);
        const auto it = j_.find(std::string(key));
        return it == j_.end() ? nullptr : &*it;
    }

    template <typename T>
    void get(std::string_view key, T& out) {
        const json* v = find(key);
        if (!v) return;
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v->is_boolean()) throw ConfigError(field(key), "expected a boolean");
            } else if constexpr (std::is_integral_v<T>) {
                if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v->is_number()) throw ConfigError(field(key), "expected a number");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v->is_string()) throw ConfigError(field(key), "expected a string");
            }
            out = v->get<T>();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(field(key), e.what());
        }
    }

    /// Numbers, or the strings "inf" / "infinity".
    void get_extended(std::string_view key, double& out) {
        const json* v = find(key);
        if (!v) return;
        if (v->is_string() && (*v == "inf" || *v == "infinity")) {
            out = std::numeric_limits<double>::infinity();
            return;
        }
        if (!v->is_number()) throw ConfigError(field(key), "expected a number or \"inf\"");
        out = v->get<double>();
    }

    void get_degrees(std::string_view key, double& radians) {
        double deg = radians * 180.0 / std::numbers::pi;
        const json* v = find(key);
        if (!v) return;
        if (!v->is_number()) throw ConfigError(field(key), "expected a number");
        deg = v->get<double>();
        radians = deg_to_rad(deg);
    }

    template <typename Enum, typename Parse>
    void get_enum(std::string_view key, Enum& out, Parse parse) {
        const json* v = find(key);
        if (!v) return;
        if (!v->is_string()) throw ConfigError(field(key), "expected a string");
        const auto parsed = parse(v->get<std::string>());
        if (!parsed) throw ConfigError(field(key), "unknown value '" + v->get<std::string>() + "'");
        out = *parsed;
    }

    std::optional<Table> sub(std::string_view key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        return Table(*v, field(key));
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.contains(key)) throw ConfigError(field(key), "unknown key");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string, std::less<>> seen_;
};

template <typename F>
void check(const std::string& section, F&& validate) {
    try {
        validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(section, e.what());
    }
}

std::optional<ConfidenceConvention> parse_convention(std::string_view name) {
    if (name == "vlfm") return ConfidenceConvention::vlfm;
    if (name == "literal") return ConfidenceConvention::literal;
    return std::nullopt;
}

std::string_view convention_name(ConfidenceConvention c) {
    return c == ConfidenceConvention::vlfm ? "vlfm" : "literal";
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError("<root>", std::string("not valid JSON: ") + e.what());
    }
    RunConfig rc;
    GenConfig& g = rc.environment;
    EpisodeConfig& e = rc.episode;
    Table t(root, "");
    t.get("rng_seed", e.rng_seed);

    if (auto s = t.sub("environment")) {
        s->get("width", g.width);
        s->get("height", g.height);
        s->get("resolution", g.resolution);
        s->get("rooms_x", g.rooms_x);
        s->get("rooms_y", g.rooms_y);
        s->get("min_room", g.min_room);
        s->get("corridor_width", g.corridor_width);
        s->get("extra_door_probability", g.extra_door_probability);
        s->get("furniture_per_room", g.furniture_per_room);
        s->get("target_size", g.target_size);
        s->get_extended("relevance_decay", g.relevance_decay);
        s->get("category", g.category);
        s->finish();
    }
    if (auto s = t.sub("episode")) {
        s->get("max_steps", e.max_steps);
        s->get("clearance", e.clearance);
        s->get("step_size", e.step_size);
        s->get_degrees("turn_angle_deg", e.turn_angle);
        s->get("min_frontier_size", e.min_frontier_size);
        s->finish();
    }
    if (auto s = t.sub("fov")) {
        s->get_degrees("horizontal_fov_deg", e.fov.horizontal_fov);
        s->get("max_range", e.fov.max_range);
        s->get("ray_count", e.fov.ray_count);
        s->finish();
    }
    if (auto s = t.sub("sensor")) {
        SensorConfig& sc = e.sensor;
        s->get_enum("kind", sc.kind, parse_sensor_kind);
        s->get("ensemble_size", sc.synthetic.ensemble_size);
        s->get("noise_sigma", sc.synthetic.noise_sigma);
        s->get("prompt_bias", sc.synthetic.prompt_bias);
        s->get_enum("convention", sc.synthetic.convention, parse_convention);
        s->get("normalize_scores", sc.normalize_scores);
        s->get("prompts", sc.prompts.prompts);
        s->get("target_token", sc.prompts.target_token);
        s->get("trace_path", sc.trace_path);
        s->get("endpoint", sc.endpoint);
        s->finish();
    }
    if (auto s = t.sub("planner")) {
        s->get_enum("strategy", e.planner.strategy, parse_strategy);
        s->get("beta", e.planner.beta);
        s->get_enum("replan", e.planner.replan, parse_replan_trigger);
        s->finish();
    }
    if (auto s = t.sub("detector")) {
        s->get("detect_range", e.detector.detect_range);
        s->get("false_negative_rate", e.detector.false_negative_rate);
        s->get("false_positive_rate", e.detector.false_positive_rate);
        s->finish();
    }
    if (auto s = t.sub("occupancy")) {
        s->get("occupied_threshold", e.occupancy.occupied_threshold);
        s->get("free_threshold", e.occupancy.free_threshold);
        s->get("hit_increment", e.occupancy.hit_increment);
        s->get("miss_decrement", e.occupancy.miss_decrement);
        s->get("clamp", e.occupancy.clamp);
        s->finish();
    }
    t.finish();

    check("environment", [&] { g.validate(); });
    check("episode", [&] { e.validate(); });
    const auto& syn = e.sensor.synthetic;
    if (syn.ensemble_size < 1) throw ConfigError("sensor.ensemble_size", "must be >= 1");
    if (!(syn.noise_sigma >= 0.0)) throw ConfigError("sensor.noise_sigma", "must be >= 0");
    if (!syn.prompt_bias.empty() &&
        syn.prompt_bias.size() != static_cast<std::size_t>(syn.ensemble_size)) {
        throw ConfigError("sensor.prompt_bias", "needs one entry per ensemble member");
    }
    if (e.sensor.prompts.prompts.empty()) throw ConfigError("sensor.prompts", "must not be empty");
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string dump_run_config(const RunConfig& rc) {
    const GenConfig& g = rc.environment;
    const EpisodeConfig& e = rc.episode;
    json decay = std::isinf(g.relevance_decay) ? json("inf") : json(g.relevance_decay);
    json j = {
        {"rng_seed", e.rng_seed},
        {"environment",
         {{"width", g.width}, {"height", g.height}, {"resolution", g.resolution},
          {"rooms_x", g.rooms_x}, {"rooms_y", g.rooms_y}, {"min_room", g.min_room},
          {"corridor_width", g.corridor_width}, {"extra_door_probability", g.extra_door_probability},
          {"furniture_per_room", g.furniture_per_room}, {"target_size", g.target_size},
          {"relevance_decay", decay}, {"category", g.category}}},
        {"episode",
         {{"max_steps", e.max_steps}, {"clearance", e.clearance}, {"step_size", e.step_size},
          {"turn_angle_deg", e.turn_angle * 180.0 / std::numbers::pi},
          {"min_frontier_size", e.min_frontier_size}}},
        {"fov",
         {{"horizontal_fov_deg", e.fov.horizontal_fov * 180.0 / std::numbers::pi},
          {"max_range", e.fov.max_range}, {"ray_count", e.fov.ray_count}}},
        {"sensor",
         {{"kind", to_string(e.sensor.kind)}, {"ensemble_size", e.sensor.synthetic.ensemble_size},
          {"noise_sigma", e.sensor.synthetic.noise_sigma},
          {"prompt_bias", e.sensor.synthetic.prompt_bias},
          {"convention", convention_name(e.sensor.synthetic.convention)},
          {"normalize_scores", e.sensor.normalize_scores}, {"prompts", e.sensor.prompts.prompts},
          {"target_token", e.sensor.prompts.target_token}, {"trace_path", e.sensor.trace_path},
          {"endpoint", e.sensor.endpoint}}},
        {"planner",
         {{"strategy", to_string(e.planner.strategy)}, {"beta", e.planner.beta},
          {"replan", to_string(e.planner.replan)}}},
        {"detector",
         {{"detect_range", e.detector.detect_range},
          {"false_negative_rate", e.detector.false_negative_rate},
          {"false_positive_rate", e.detector.false_positive_rate}}},
        {"occupancy",
         {{"occupied_threshold", e.occupancy.occupied_threshold},
          {"free_threshold", e.occupancy.free_threshold},
          {"hit_increment", e.occupancy.hit_increment},
          {"miss_decrement", e.occupancy.miss_decrement}, {"clamp", e.occupancy.clamp}}},
    };
    return j.dump(2);
}

EpisodeConfig episode_config_for(const RunConfig& config, Strategy strategy, std::uint64_t seed) {
    EpisodeConfig e = config.episode;
    e.planner.strategy = strategy;
    e.episode_id = seed;
    e.rng_seed = mix_seed(config.episode.rng_seed, seed);
    e.planner.rng_seed = mix_seed(e.rng_seed, 1);
    return e;
}

}  // namespace banditnav
