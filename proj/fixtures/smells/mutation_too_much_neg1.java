public int adjustState(int state) {
    state = shift(state, 0);
    state = shift(state, 1);
    state = shift(state, 2);
    state = shift(state, 3);
    state = shift(state, 4);
    state = shift(state, 5);
    state = shift(state, 6);
    state = shift(state, 7);
    state = shift(state, 8);
    state = shift(state, 9);
    return state;
}
