//! File formats: street and point CSV, JSON city configs, GeoJSON and SVG.

mod config;
mod geojson;
mod points;
mod streets;
mod svg;

pub use config::{load_city_config, parse_city_config};
pub use geojson::{
    city_features, export_city_geojson, export_network_geojson, geojson_string, import_geojson, network_features,
    parse_geojson, write_geojson, LineFeature,
};
pub use points::{
    component_label, export_points_csv, import_points_csv, write_points, PointRecord, PointRow, POINTS_HEADER,
};
pub use streets::{export_streets_csv, import_streets_csv, read_streets, write_streets, STREET_HEADER};
pub use svg::{
    base_stroke, city_svg, network_svg, render_city_svg, render_network_svg, stroke_width, svg_string, Scene,
    DEFAULT_WIDTH_PX, MIN_STROKE_PX,
};
