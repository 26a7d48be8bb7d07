//! Monte Carlo critical values of the Lilliefors statistic (400k draws per
//! sample size); generated by `scripts/gen_lilliefors_table.py`.

pub(crate) const UPPER_TAIL: [f64; 17] = [
    0.99, 0.95, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.15, 0.1, 0.05, 0.025, 0.01, 0.005, 0.001,
];

pub(crate) const CRITICAL: [(usize, [f64; 17]); 28] = [
    (
        4,
        [
            0.14450, 0.16855, 0.18646, 0.21144, 0.22990, 0.24511, 0.25826, 0.27116, 0.28531, 0.30284, 0.32159, 0.34541,
            0.37523, 0.39557, 0.41310, 0.42145, 0.43244,
        ],
    ),
    (
        5,
        [
            0.13599, 0.16115, 0.17646, 0.19553, 0.20904, 0.22110, 0.23352, 0.24790, 0.26698, 0.28942, 0.30273, 0.31896,
            0.34325, 0.36722, 0.39665, 0.41310, 0.43862,
        ],
    ),
    (
        6,
        [
            0.12905, 0.15136, 0.16385, 0.17944, 0.19232, 0.20501, 0.21864, 0.23351, 0.24959, 0.26886, 0.28106, 0.29745,
            0.32355, 0.34589, 0.37064, 0.38721, 0.42261,
        ],
    ),
    (
        7,
        [
            0.12249, 0.14178, 0.15250, 0.16781, 0.18100, 0.19365, 0.20615, 0.21919, 0.23386, 0.25224, 0.26430, 0.28009,
            0.30415, 0.32520, 0.35076, 0.36831, 0.40157,
        ],
    ),
    (
        8,
        [
            0.11605, 0.13284, 0.14344, 0.15874, 0.17148, 0.18321, 0.19476, 0.20700, 0.22112, 0.23895, 0.25024, 0.26503,
            0.28757, 0.30794, 0.33220, 0.34851, 0.38320,
        ],
    ),
    (
        9,
        [
            0.11043, 0.12612, 0.13651, 0.15125, 0.16309, 0.17399, 0.18492, 0.19671, 0.21023, 0.22714, 0.23798, 0.25219,
            0.27416, 0.29376, 0.31764, 0.33377, 0.36659,
        ],
    ),
    (
        10,
        [
            0.10482, 0.12041, 0.13067, 0.14466, 0.15585, 0.16628, 0.17679, 0.18808, 0.20097, 0.21713, 0.22755, 0.24113,
            0.26205, 0.28124, 0.30348, 0.31888, 0.35120,
        ],
    ),
    (
        11,
        [
            0.10023, 0.11570, 0.12546, 0.13870, 0.14944, 0.15944, 0.16953, 0.18038, 0.19266, 0.20804, 0.21802, 0.23108,
            0.25126, 0.26945, 0.29117, 0.30609, 0.33684,
        ],
    ),
    (
        12,
        [
            0.09665, 0.11148, 0.12075, 0.13348, 0.14377, 0.15345, 0.16314, 0.17356, 0.18557, 0.20040, 0.21003, 0.22258,
            0.24221, 0.25981, 0.28093, 0.29564, 0.32509,
        ],
    ),
    (
        13,
        [
            0.09330, 0.10757, 0.11648, 0.12869, 0.13868, 0.14799, 0.15741, 0.16750, 0.17892, 0.19334, 0.20251, 0.21456,
            0.23344, 0.25027, 0.27073, 0.28441, 0.31408,
        ],
    ),
    (
        14,
        [
            0.09028, 0.10401, 0.11267, 0.12455, 0.13417, 0.14322, 0.15226, 0.16194, 0.17314, 0.18699, 0.19586, 0.20758,
            0.22598, 0.24232, 0.26183, 0.27594, 0.30497,
        ],
    ),
    (
        15,
        [
            0.08763, 0.10097, 0.10931, 0.12088, 0.13016, 0.13882, 0.14758, 0.15703, 0.16772, 0.18110, 0.18987, 0.20130,
            0.21912, 0.23515, 0.25435, 0.26725, 0.29555,
        ],
    ),
    (
        16,
        [
            0.08506, 0.09797, 0.10609, 0.11727, 0.12637, 0.13482, 0.14332, 0.15246, 0.16288, 0.17584, 0.18425, 0.19525,
            0.21254, 0.22835, 0.24747, 0.25987, 0.28721,
        ],
    ),
    (
        17,
        [
            0.08290, 0.09540, 0.10334, 0.11419, 0.12301, 0.13123, 0.13953, 0.14837, 0.15850, 0.17124, 0.17942, 0.19004,
            0.20685, 0.22196, 0.24013, 0.25286, 0.28096,
        ],
    ),
    (
        18,
        [
            0.08064, 0.09285, 0.10051, 0.11111, 0.11966, 0.12767, 0.13576, 0.14437, 0.15423, 0.16661, 0.17459, 0.18513,
            0.20149, 0.21631, 0.23425, 0.24649, 0.27385,
        ],
    ),
    (
        19,
        [
            0.07866, 0.09059, 0.09815, 0.10843, 0.11683, 0.12465, 0.13239, 0.14082, 0.15042, 0.16250, 0.17029, 0.18061,
            0.19663, 0.21138, 0.22886, 0.24074, 0.26605,
        ],
    ),
    (
        20,
        [
            0.07687, 0.08854, 0.09582, 0.10593, 0.11406, 0.12168, 0.12936, 0.13758, 0.14694, 0.15870, 0.16635, 0.17628,
            0.19200, 0.20620, 0.22343, 0.23509, 0.25963,
        ],
    ),
    (
        25,
        [
            0.06944, 0.07988, 0.08648, 0.09558, 0.10295, 0.10978, 0.11664, 0.12401, 0.13243, 0.14301, 0.14989, 0.15890,
            0.17308, 0.18577, 0.20130, 0.21218, 0.23553,
        ],
    ),
    (
        30,
        [
            0.06379, 0.07339, 0.07944, 0.08769, 0.09438, 0.10070, 0.10700, 0.11374, 0.12138, 0.13115, 0.13746, 0.14589,
            0.15885, 0.17087, 0.18512, 0.19518, 0.21710,
        ],
    ),
    (
        35,
        [
            0.05936, 0.06833, 0.07390, 0.08159, 0.08780, 0.09360, 0.09949, 0.10582, 0.11302, 0.12201, 0.12791, 0.13565,
            0.14768, 0.15860, 0.17197, 0.18130, 0.20057,
        ],
    ),
    (
        40,
        [
            0.05578, 0.06414, 0.06939, 0.07660, 0.08244, 0.08794, 0.09347, 0.09935, 0.10612, 0.11459, 0.12004, 0.12719,
            0.13845, 0.14906, 0.16144, 0.17014, 0.18871,
        ],
    ),
    (
        45,
        [
            0.05269, 0.06070, 0.06567, 0.07252, 0.07798, 0.08309, 0.08832, 0.09393, 0.10029, 0.10828, 0.11352, 0.12037,
            0.13110, 0.14089, 0.15270, 0.16107, 0.17888,
        ],
    ),
    (
        50,
        [
            0.05026, 0.05772, 0.06243, 0.06894, 0.07418, 0.07905, 0.08396, 0.08926, 0.09532, 0.10287, 0.10776, 0.11428,
            0.12431, 0.13344, 0.14472, 0.15221, 0.16942,
        ],
    ),
    (
        60,
        [
            0.04604, 0.05292, 0.05728, 0.06318, 0.06793, 0.07238, 0.07688, 0.08174, 0.08728, 0.09427, 0.09875, 0.10465,
            0.11396, 0.12257, 0.13295, 0.14015, 0.15516,
        ],
    ),
    (
        70,
        [
            0.04288, 0.04925, 0.05321, 0.05865, 0.06313, 0.06730, 0.07149, 0.07597, 0.08112, 0.08757, 0.09176, 0.09728,
            0.10582, 0.11364, 0.12330, 0.12992, 0.14447,
        ],
    ),
    (
        80,
        [
            0.04017, 0.04613, 0.04984, 0.05498, 0.05913, 0.06301, 0.06696, 0.07115, 0.07598, 0.08202, 0.08595, 0.09112,
            0.09929, 0.10676, 0.11593, 0.12221, 0.13563,
        ],
    ),
    (
        90,
        [
            0.03790, 0.04359, 0.04712, 0.05195, 0.05589, 0.05954, 0.06324, 0.06723, 0.07178, 0.07747, 0.08113, 0.08599,
            0.09365, 0.10066, 0.10887, 0.11488, 0.12813,
        ],
    ),
    (
        100,
        [
            0.03612, 0.04147, 0.04479, 0.04935, 0.05310, 0.05658, 0.06011, 0.06383, 0.06814, 0.07359, 0.07711, 0.08175,
            0.08901, 0.09557, 0.10358, 0.10937, 0.12169,
        ],
    ),
];
