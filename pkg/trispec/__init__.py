from .trisconfig import (
    BruteForceConfig as BruteForceConfig,
)
from .trisconfig import (
    CertifierConfig as CertifierConfig,
)
from .trisconfig import (
    GraphConfig as GraphConfig,
)
from .trisconfig import (
    GridConfig as GridConfig,
)
from .trisconfig import (
    OutputConfig as OutputConfig,
)
from .trisconfig import (
    ResourceCapError as ResourceCapError,
)
from .trisconfig import (
    RunConfig as RunConfig,
)
from .trisconfig import (
    config_from_env as config_from_env,
)
from .trisconfig import (
    load_config as load_config,
)
from .triscert import (
    Box as Box,
)
from .triscert import (
    CertReport as CertReport,
)
from .triscert import (
    FailsAt as FailsAt,
)
from .triscert import (
    Hyperplane as Hyperplane,
)
from .triscert import (
    Inconclusive as Inconclusive,
)
from .triscert import (
    PointLocus as PointLocus,
)
from .triscert import (
    Poly3 as Poly3,
)
from .triscert import (
    Positive as Positive,
)
from .triscert import (
    Product as Product,
)
from .triscert import (
    SignatureRegion as SignatureRegion,
)
from .triscert import (
    certify_positive as certify_positive,
)
from .triscert import (
    certify_rho5_type as certify_rho5_type,
)
from .triscert import (
    eval_interval as eval_interval,
)
from .triscert import (
    parse_box as parse_box,
)
from .triscert import (
    parse_expression as parse_expression,
)
from .triscert import (
    parse_locus as parse_locus,
)
from .triscert import (
    rho5_certificate as rho5_certificate,
)
from .triscert import (
    sample_minimum as sample_minimum,
)
from .triscert import (
    signature_box as signature_box,
)
from .triscert import (
    type_case_list as type_case_list,
)
from .trisforms import (
    EXCEPTIONAL as EXCEPTIONAL,
)
from .trisforms import (
    INF as INF,
)
from .trisforms import (
    Signature as Signature,
)
from .trisforms import (
    big_delta as big_delta,
)
from .trisforms import (
    c_star_bound as c_star_bound,
)
from .trisforms import (
    canonical_l0 as canonical_l0,
)
from .trisforms import (
    contact_data as contact_data,
)
from .trisforms import (
    cos_params as cos_params,
)
from .trisforms import (
    delta_fn as delta_fn,
)
from .trisforms import (
    head_formulas as head_formulas,
)
from .trisforms import (
    l_table as l_table,
)
from .trisforms import (
    rho5_polynomial_333 as rho5_polynomial_333,
)
from .trisforms import (
    side_coshes as side_coshes,
)
from .trisgeom import (
    Motion as Motion,
)
from .trisgeom import (
    UhpPoint as UhpPoint,
)
from .trisgeom import (
    apply as apply,
)
from .trisgeom import (
    classify as classify,
)
from .trisgeom import (
    compose as compose,
)
from .trisgeom import (
    cosh_dist as cosh_dist,
)
from .trisgeom import (
    dist as dist,
)
from .trisgeom import (
    inverse as inverse,
)
from .trisgeom import (
    translation_length as translation_length,
)
from .trisgraph import (
    build_star_ball as build_star_ball,
)
from .trisgraph import (
    dump_svg as dump_svg,
)
from .trisgraph import (
    lambda_star as lambda_star,
)
from .trisgraph import (
    level_catalog as level_catalog,
)
from .trisgraph import (
    rho_star as rho_star,
)
from .trisgraph import (
    rho_star_report as rho_star_report,
)
from .trisgroup import (
    corealize_subgroup as corealize_subgroup,
)
from .trisgroup import (
    generators as generators,
)
from .trisgroup import (
    is_conjugate as is_conjugate,
)
from .trisgroup import (
    realize as realize,
)
from .trisgroup import (
    triangle_group as triangle_group,
)
from .trispectrum import (
    SpectrumEntry as SpectrumEntry,
)
from .trispectrum import (
    SpectrumHead as SpectrumHead,
)
from .trispectrum import (
    brute_force_head as brute_force_head,
)
from .trispectrum import (
    cross_validate as cross_validate,
)
from .trispectrum import (
    default_cutoff as default_cutoff,
)
from .trispectrum import (
    grid_signatures as grid_signatures,
)
from .trispectrum import (
    predicted_head as predicted_head,
)
from .trispectrum import (
    validate_grid as validate_grid,
)
from .trisreport import (
    cert_frame as cert_frame,
)
from .trisreport import (
    cert_report_model as cert_report_model,
)
from .trisreport import (
    comparison_frame as comparison_frame,
)
from .trisreport import (
    dump_json as dump_json,
)
from .trisreport import (
    forms_frame as forms_frame,
)
from .trisreport import (
    grid_report as grid_report,
)
from .trisreport import (
    head_frame as head_frame,
)
from .trisreport import (
    head_report as head_report,
)
from .trisreport import (
    parse_head_report as parse_head_report,
)
from .trisreport import (
    render as render,
)
from .trisreport import (
    rho_frame as rho_frame,
)
from .trisreport import (
    validation_frame as validation_frame,
)
from .trisreport import (
    write_output as write_output,
)
from .trisreport import (
    __version__ as __version__,
)
