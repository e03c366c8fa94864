"""Published table of densities 1/B_N(q), columns 1/q = 2, 3, 5, 7, 11."""

INV_Q = (2, 3, 5, 7, 11)

TABLE1 = {
    2: ("0.59546", "0.84191", "0.95049", "0.97627", "0.99092"),
    3: ("0.47084", "0.79666", "0.94102", "0.97295", "0.99010"),
    4: ("0.42109", "0.78230", "0.93915", "0.97248", "0.99002"),
    5: ("0.39877", "0.77759", "0.93877", "0.97241", "0.99002"),
    6: ("0.38819", "0.77603", "0.93870", "0.97240", "0.99002"),
    7: ("0.38304", "0.77551", "0.93868", "0.97240", "0.99002"),
    8: ("0.38050", "0.77533", "0.93868", "0.97240", "0.99002"),
    9: ("0.37924", "0.77528", "0.93868", "0.97240", "0.99002"),
    10: ("0.37861", "0.77526", "0.93868", "0.97240", "0.99002"),
    100: ("0.37798", "0.77525", "0.93868", "0.97240", "0.99002"),
}

EULER_ROW = ("0.28879", "0.56013", "0.76033", "0.83680", "0.90083")
