package main

func phil(left chan int, right chan int) {
	for {
		<-left
		<-right
		left <- 1
		right <- 1
	}
}

func fork(f chan int) {
	for {
		f <- 1
		<-f
	}
}

// Three philosophers around three forks, each picking left then right.
func main() {
	f1 := make(chan int)
	f2 := make(chan int)
	f3 := make(chan int)
	go fork(f1)
	go fork(f2)
	go fork(f3)
	go phil(f1, f2)
	go phil(f2, f3)
	go phil(f3, f1)
	select {}
}
