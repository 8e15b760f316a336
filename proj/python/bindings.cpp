#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <vector>

#include "pabeam/beamform.hpp"
#include "pabeam/dataio.hpp"
#include "pabeam/metrics.hpp"
#include "pabeam/simulate.hpp"
#include "pabeam/types.hpp"

namespace py = pybind11;
using namespace pabeam;

namespace {

py::array_t<double> matrix_to_numpy(const std::vector<double>& values,
                                    std::size_t rows, std::size_t cols) {
  py::array_t<double> out(
      std::vector<py::ssize_t>{py::ssize_t(rows), py::ssize_t(cols)});
  std::memcpy(out.mutable_data(), values.data(),
              values.size() * sizeof(double));
  return out;
}

std::vector<double> numpy_to_flat(const py::array_t<double, py::array::c_style |
                                                                py::array::forcecast>& arr) {
  if (arr.ndim() != 2) {
    throw std::invalid_argument("expected a 2-D array");
  }
  std::vector<double> flat(std::size_t(arr.size()));
  std::memcpy(flat.data(), arr.data(), flat.size() * sizeof(double));
  return flat;
}

std::vector<double> sequence_to_vector(const py::object& seq) {
  return seq.cast<std::vector<double>>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Photoacoustic beamforming toolkit: synthetic RF simulation, "
            "DAS/DMAS-family reconstruction and resolution metrics";

  py::class_<Vec2>(m, "Vec2")
      .def(py::init<double, double>(), py::arg("x"), py::arg("z"))
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("z", &Vec2::z)
      .def("__repr__", [](const Vec2& v) {
        return "Vec2(x=" + std::to_string(v.x) + ", z=" + std::to_string(v.z) + ")";
      });

  py::class_<ArrayGeometry>(m, "ArrayGeometry")
      .def_readonly("pitch", &ArrayGeometry::pitch)
      .def_readonly("aperture_center_x", &ArrayGeometry::aperture_center_x)
      .def_property_readonly("num_elements", &ArrayGeometry::num_elements)
      .def_property_readonly("element_positions", [](const ArrayGeometry& g) {
        py::array_t<double> out(std::vector<py::ssize_t>{
            py::ssize_t(g.num_elements()), py::ssize_t(2)});
        auto view = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < g.num_elements(); ++i) {
          view(i, 0) = g.element_positions[i].x;
          view(i, 1) = g.element_positions[i].z;
        }
        return out;
      });

  py::class_<RfFrame>(m, "RfFrame")
      .def(py::init([](const py::array_t<double, py::array::c_style |
                                                     py::array::forcecast>& samples,
                       double fs, double c) {
             RfFrame frame;
             if (samples.ndim() != 2) {
               throw std::invalid_argument("samples must be 2-D (channels x samples)");
             }
             frame.num_channels = std::size_t(samples.shape(0));
             frame.num_samples = std::size_t(samples.shape(1));
             frame.sampling_frequency_hz = fs;
             frame.speed_of_sound_m_s = c;
             frame.samples = numpy_to_flat(samples);
             return frame;
           }),
           py::arg("samples"), py::arg("sampling_frequency_hz"),
           py::arg("speed_of_sound_m_s"))
      .def_readonly("num_channels", &RfFrame::num_channels)
      .def_readonly("num_samples", &RfFrame::num_samples)
      .def_readonly("sampling_frequency_hz", &RfFrame::sampling_frequency_hz)
      .def_readonly("speed_of_sound_m_s", &RfFrame::speed_of_sound_m_s)
      .def_property_readonly("samples", [](const RfFrame& f) {
        return matrix_to_numpy(f.samples, f.num_channels, f.num_samples);
      });

  py::class_<Absorber>(m, "Absorber")
      .def(py::init<double, double, double, double>(), py::arg("x"),
           py::arg("z"), py::arg("amplitude") = 1.0, py::arg("radius_m") = 0.0)
      .def_readwrite("x", &Absorber::x)
      .def_readwrite("z", &Absorber::z)
      .def_readwrite("amplitude", &Absorber::amplitude)
      .def_readwrite("radius_m", &Absorber::radius_m);

  py::class_<Phantom>(m, "Phantom")
      .def(py::init<>())
      .def(py::init([](const std::vector<Absorber>& absorbers) {
             Phantom p;
             p.absorbers = absorbers;
             return p;
           }),
           py::arg("absorbers"))
      .def_readwrite("absorbers", &Phantom::absorbers);

  py::class_<ImageGrid>(m, "ImageGrid")
      .def_readonly("x_min", &ImageGrid::x_min)
      .def_readonly("x_max", &ImageGrid::x_max)
      .def_readonly("z_min", &ImageGrid::z_min)
      .def_readonly("z_max", &ImageGrid::z_max)
      .def_readonly("dx", &ImageGrid::dx)
      .def_readonly("dz", &ImageGrid::dz)
      .def_readonly("nx", &ImageGrid::nx)
      .def_readonly("nz", &ImageGrid::nz)
      .def("x_at", &ImageGrid::x_at)
      .def("z_at", &ImageGrid::z_at)
      .def("nearest_x_index", &ImageGrid::nearest_x_index)
      .def("nearest_z_index", &ImageGrid::nearest_z_index);

  py::enum_<ImageStage>(m, "ImageStage")
      .value("raw", ImageStage::raw)
      .value("envelope", ImageStage::envelope)
      .value("db", ImageStage::db);

  py::class_<BeamformedImage>(m, "BeamformedImage")
      .def_readonly("nx", &BeamformedImage::nx)
      .def_readonly("nz", &BeamformedImage::nz)
      .def_readonly("stage", &BeamformedImage::stage)
      .def_readonly("dynamic_range_db", &BeamformedImage::dynamic_range_db)
      .def_property_readonly("values", [](const BeamformedImage& im) {
        return matrix_to_numpy(im.values, im.nx, im.nz);
      });

  py::class_<PulseSpec>(m, "PulseSpec")
      .def(py::init<double, double>(), py::arg("center_frequency_hz") = 7e6,
           py::arg("fractional_bandwidth") = 0.77)
      .def_readwrite("center_frequency_hz", &PulseSpec::center_frequency_hz)
      .def_readwrite("fractional_bandwidth", &PulseSpec::fractional_bandwidth)
      .def("envelope_sigma_s", &PulseSpec::envelope_sigma_s);

  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def(py::init<double, std::uint64_t>(), py::arg("snr_db") = 50.0,
           py::arg("seed") = 1)
      .def_readwrite("snr_db", &NoiseSpec::snr_db)
      .def_readwrite("seed", &NoiseSpec::seed);

  py::enum_<Kernel>(m, "Kernel")
      .value("das", Kernel::das)
      .value("dmas", Kernel::dmas)
      .value("mdmas", Kernel::mdmas);

  py::class_<MethodSpec>(m, "MethodSpec")
      .def(py::init([](const std::string& name) { return MethodSpec::parse(name); }),
           py::arg("name"))
      .def(py::init<Kernel, bool>(), py::arg("kernel"),
           py::arg("cf_weighting") = false)
      .def_readwrite("kernel", &MethodSpec::kernel)
      .def_readwrite("cf_weighting", &MethodSpec::cf_weighting)
      .def_property_readonly("name", &MethodSpec::name)
      .def_static("all", &MethodSpec::all);

  py::class_<FrameValidation>(m, "FrameValidation")
      .def_readonly("ok", &FrameValidation::ok)
      .def_readonly("issues", &FrameValidation::issues)
      .def("summary", &FrameValidation::summary);

  // construction and validation
  m.def("build_linear_array", &build_linear_array, py::arg("num_elements"),
        py::arg("pitch"), py::arg("center_x") = 0.0);
  m.def("build_grid", &build_grid, py::arg("x_min"), py::arg("x_max"),
        py::arg("z_min"), py::arg("z_max"), py::arg("dx"), py::arg("dz"));
  m.def("validate_frame", &validate_frame, py::arg("frame"), py::arg("geometry"));

  // simulation
  m.def("pulse_waveform", &pulse_waveform, py::arg("t"), py::arg("spec"));
  m.def("simulate_frame", &simulate_frame, py::arg("phantom"),
        py::arg("geometry"), py::arg("sampling_frequency_hz"),
        py::arg("speed_of_sound_m_s"), py::arg("num_samples"), py::arg("spec"),
        py::call_guard<py::gil_scoped_release>());
  m.def("add_gaussian_noise", &add_gaussian_noise, py::arg("frame"),
        py::arg("noise"), py::call_guard<py::gil_scoped_release>());
  m.def("preset_phantom", &preset_phantom, py::arg("name"));

  // beamforming
  m.def("time_of_flight", &time_of_flight, py::arg("pixel"), py::arg("element"),
        py::arg("speed_of_sound_m_s"));
  m.def("sample_at", &sample_at, py::arg("frame"), py::arg("channel"),
        py::arg("t"));
  m.def("gather_delayed",
        py::overload_cast<const RfFrame&, const ArrayGeometry&, Vec2, double>(
            &gather_delayed),
        py::arg("frame"), py::arg("geometry"), py::arg("pixel"),
        py::arg("speed_of_sound_m_s"));
  m.def("das_pixel",
        [](const py::object& a) { return das_pixel(sequence_to_vector(a)); });
  m.def("coherence_factor", [](const py::object& a) {
    return coherence_factor(sequence_to_vector(a));
  });
  m.def("signed_sqrt", &signed_sqrt);
  m.def("dmas_pixel",
        [](const py::object& a) { return dmas_pixel(sequence_to_vector(a)); });
  m.def("mdmas_pixel",
        [](const py::object& a) { return mdmas_pixel(sequence_to_vector(a)); });
  m.def("beamform_image", &beamform_image, py::arg("frame"), py::arg("geometry"),
        py::arg("grid"), py::arg("method"), py::arg("speed_of_sound_m_s"),
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("analytic_envelope", [](const py::object& a) {
    return analytic_envelope(sequence_to_vector(a));
  });
  m.def("envelope", &envelope, py::arg("image"));
  m.def("log_compress", &log_compress, py::arg("image"),
        py::arg("dynamic_range_db") = 60.0);

  // metrics
  py::class_<metrics::LateralProfile>(m, "LateralProfile")
      .def_readonly("lateral_positions", &metrics::LateralProfile::lateral_positions)
      .def_readonly("values_db", &metrics::LateralProfile::values_db)
      .def_readonly("depth", &metrics::LateralProfile::depth);

  py::class_<metrics::Peak>(m, "Peak")
      .def_readonly("position", &metrics::Peak::position)
      .def_readonly("value_db", &metrics::Peak::value_db)
      .def_readonly("index", &metrics::Peak::index);

  py::class_<metrics::LobeExtent>(m, "LobeExtent")
      .def_readonly("lo", &metrics::LobeExtent::lo)
      .def_readonly("hi", &metrics::LobeExtent::hi);

  py::class_<metrics::Rect>(m, "Rect")
      .def(py::init<double, double, double, double>(), py::arg("x_min"),
           py::arg("x_max"), py::arg("z_min"), py::arg("z_max"));

  m.def("lateral_profile", &metrics::lateral_profile, py::arg("db_image"),
        py::arg("grid"), py::arg("depth"));
  m.def("find_peaks", &metrics::find_peaks, py::arg("profile"),
        py::arg("expected"));
  m.def("valley_depth", &metrics::valley_depth, py::arg("profile"),
        py::arg("p1"), py::arg("p2"));
  m.def("main_lobe_extent", &metrics::main_lobe_extent, py::arg("profile"),
        py::arg("peak"));
  m.def("sidelobe_level",
        [](const metrics::LateralProfile& profile,
           const std::vector<metrics::LobeExtent>& lobes) {
          return metrics::sidelobe_level(profile, lobes);
        },
        py::arg("profile"), py::arg("main_lobes"));
  m.def("fwhm", &metrics::fwhm, py::arg("profile"), py::arg("peak"));
  m.def("image_snr",
        [](const BeamformedImage& image, const ImageGrid& grid,
           const std::vector<metrics::Rect>& targets,
           const metrics::Rect& background) {
          return metrics::image_snr(image, grid, targets, background);
        },
        py::arg("db_image"), py::arg("grid"), py::arg("target_regions"),
        py::arg("background_region"));

  // persistence
  py::class_<io::DatasetMetadata>(m, "DatasetMetadata")
      .def(py::init<>())
      .def_readwrite("pulse", &io::DatasetMetadata::pulse)
      .def_readwrite("phantom", &io::DatasetMetadata::phantom)
      .def_readwrite("noise", &io::DatasetMetadata::noise);

  py::class_<io::Dataset>(m, "Dataset")
      .def_readonly("frame", &io::Dataset::frame)
      .def_readonly("geometry", &io::Dataset::geometry)
      .def_readonly("metadata", &io::Dataset::metadata);

  m.def("write_dataset", &io::write_dataset, py::arg("path_prefix"),
        py::arg("frame"), py::arg("geometry"), py::arg("metadata"));
  m.def("read_dataset", &io::read_dataset, py::arg("path_prefix"));
  m.def("write_pgm", &io::write_pgm, py::arg("db_image"), py::arg("path"),
        py::arg("dynamic_range_db"));
  m.def("write_profile_csv",
        py::overload_cast<const metrics::LateralProfile&, const std::string&>(
            &io::write_profile_csv),
        py::arg("profile"), py::arg("path"));
}
